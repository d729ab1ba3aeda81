#include "qsm/isomaps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "parallel.hpp"

namespace qsm {

std::string_view to_string(ImplementerKind k) {
  return k == ImplementerKind::Unitary ? "unitary" : "antiunitary";
}

std::string_view to_string(MapDomain d) {
  return d == MapDomain::FullDensity ? "density" : "states";
}

std::string_view to_string(NamedMap m) {
  switch (m) {
    case NamedMap::Depolarizing: return "depolarizing";
    case NamedMap::Pinching: return "pinching";
    case NamedMap::TraceRescale: return "trace-rescale";
  }
  return "unknown";
}

NamedMap named_map_from_string(std::string_view name) {
  if (name == "depolarizing") return NamedMap::Depolarizing;
  if (name == "pinching") return NamedMap::Pinching;
  if (name == "trace-rescale") return NamedMap::TraceRescale;
  throw Error(ErrorCode::InvalidParameter, "unknown named map '" + std::string(name) + "'");
}

MapDomain map_domain_from_string(std::string_view name) {
  if (name == "density") return MapDomain::FullDensity;
  if (name == "states") return MapDomain::StatesOnly;
  throw Error(ErrorCode::InvalidParameter, "unknown map domain '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// StateMap

StateMap StateMap::conjugation(ImplementerKind kind, Unitary u, MapDomain domain) {
  StateMap m;
  m.kind_ = kind == ImplementerKind::Unitary ? Kind::UnitaryConj : Kind::AntiunitaryConj;
  m.dim_ = u.dim();
  m.domain_ = domain;
  m.label_ = std::string(to_string(kind));
  m.implementer_ = std::move(u);
  return m;
}

StateMap StateMap::oracle(int n, OracleFn fn, MapDomain domain, std::string label,
                          bool concurrent_safe) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "oracle dimension must be >= 1");
  if (!fn) throw Error(ErrorCode::InvalidParameter, "oracle function is empty");
  StateMap m;
  m.kind_ = Kind::Oracle;
  m.dim_ = n;
  m.domain_ = domain;
  m.label_ = std::move(label);
  m.concurrent_safe_ = concurrent_safe;
  m.oracle_ = std::make_shared<const OracleFn>(std::move(fn));
  return m;
}

StateMap StateMap::identity(int n, MapDomain domain) {
  StateMap m = conjugation(ImplementerKind::Unitary, Unitary::identity(n), domain);
  m.label_ = "identity";
  return m;
}

StateMap StateMap::transpose(int n, MapDomain domain) {
  StateMap m = conjugation(ImplementerKind::Antiunitary, Unitary::identity(n), domain);
  m.label_ = "transpose";
  return m;
}

StateMap StateMap::with_domain(MapDomain domain) const {
  StateMap m = *this;
  m.domain_ = domain;
  return m;
}

StateMap StateMap::as_oracle(std::string label) const {
  const StateMap inner = with_domain(MapDomain::FullDensity);
  return oracle(
      dim_, [inner](const HermitianOperator& a) { return inner.evaluate(a); }, domain_,
      std::move(label), concurrent_safe_);
}

HermitianOperator StateMap::evaluate(const HermitianOperator& a) const {
  switch (kind_) {
    case Kind::UnitaryConj:
      return conjugate_by(implementer_->matrix(), a);
    case Kind::AntiunitaryConj:
      return conjugate_by(implementer_->matrix(), conjugate(a));
    case Kind::Named:
      switch (*named_) {
        case NamedMap::Depolarizing:
          return (1.0 - parameter_) * a +
                 (parameter_ * trace(a) / dim_) * HermitianOperator::identity(dim_);
        case NamedMap::Pinching: {
          const Matrix& b = implementer_->matrix();
          const Matrix rotated = b.adjoint() * a.matrix() * b;
          return HermitianOperator(b * Matrix(rotated.diagonal().asDiagonal()) * b.adjoint());
        }
        case NamedMap::TraceRescale:
          return parameter_ * a;
      }
      break;
    case Kind::Oracle: {
      HermitianOperator out = (*oracle_)(a);
      if (out.dim() != dim_) {
        throw Error(ErrorCode::DimensionMismatch, "oracle returned an operator of the wrong dim");
      }
      return out;
    }
  }
  throw Error(ErrorCode::InvalidParameter, "corrupt state map");
}

DensityOperator StateMap::operator()(const DensityOperator& a) const { return apply_map(*this, a); }

StateMap named_nonisometry(NamedMap id, int n, double parameter, std::optional<Unitary> basis) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "dimension must be >= 1");
  StateMap m;
  m.kind_ = StateMap::Kind::Named;
  m.dim_ = n;
  m.named_ = id;
  m.parameter_ = parameter;
  switch (id) {
    case NamedMap::Depolarizing:
      if (!(parameter >= 0.0 && parameter <= 1.0)) {
        throw Error(ErrorCode::InvalidParameter, "depolarizing p must lie in [0, 1]", parameter);
      }
      m.label_ = "depolarizing(" + std::to_string(parameter) + ")";
      break;
    case NamedMap::Pinching:
      if (basis && basis->dim() != n) {
        throw Error(ErrorCode::InvalidParameter, "pinching basis has the wrong dimension");
      }
      m.implementer_ = basis ? std::move(*basis) : Unitary::identity(n);
      m.label_ = "pinching";
      break;
    case NamedMap::TraceRescale:
      if (!(parameter > 0.0) || !std::isfinite(parameter)) {
        throw Error(ErrorCode::InvalidParameter, "trace-rescale c must be positive", parameter);
      }
      m.label_ = "trace-rescale(" + std::to_string(parameter) + ")";
      break;
  }
  return m;
}

DensityOperator apply_map(const StateMap& m, const DensityOperator& a) {
  if (a.dim() != m.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "map of dim " + std::to_string(m.dim()) +
                                                  " applied to operator of dim " +
                                                  std::to_string(a.dim()));
  }
  const bool states = m.domain() == MapDomain::StatesOnly;
  if (states && std::abs(a.trace() - 1.0) > 1e-10) {
    throw Error(ErrorCode::DomainError, "state map applied to a non-state", a.trace());
  }
  const HermitianOperator out = m.evaluate(a.op());
  const Spectrum s = hermitian_eig(out);
  const double tr = trace(out);
  if (s.eigenvalues(0) < -1e-12 * (1.0 + std::abs(tr))) {
    throw Error(ErrorCode::DomainError, "map output is not positive semidefinite",
                s.eigenvalues(0));
  }
  if (states && std::abs(tr - 1.0) > 1e-10) {
    throw Error(ErrorCode::DomainError, "state map produced trace " + std::to_string(tr), tr);
  }
  return DensityOperator::project(out);
}

// ---------------------------------------------------------------------------
// Sampling

DensityOperator sample_domain_element(MapDomain domain, int n, RngStream& rng) {
  const int rank = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  if (domain == MapDomain::StatesOnly) return random_state(n, rank, rng).density();
  return random_density(n, rank, 0.2 + 1.8 * rng.uniform(), rng);
}

std::pair<DensityOperator, DensityOperator> sample_domain_pair(MapDomain domain, int n,
                                                               RngStream& rng) {
  const bool states = domain == MapDomain::StatesOnly;
  auto draw_trace = [&] { return states ? 1.0 : 0.2 + 1.8 * rng.uniform(); };
  switch (rng.below(3)) {
    case 0: {
      const double tx = draw_trace();
      const double ty = draw_trace();
      DensityOperator x = tx * random_pure_state(n, rng).as_projection().density();
      DensityOperator y = ty * random_pure_state(n, rng).as_projection().density();
      return {std::move(x), std::move(y)};
    }
    case 1:
      if (n >= 2) {
        const double tx = draw_trace();
        const double ty = draw_trace();
        return random_orthogonal_pair(n, tx, ty, rng);
      }
      [[fallthrough]];
    default: {
      DensityOperator x = sample_domain_element(domain, n, rng);
      DensityOperator y = sample_domain_element(domain, n, rng);
      return {std::move(x), std::move(y)};
    }
  }
}

// ---------------------------------------------------------------------------
// Isometry and preservation checks

IsometryReport check_isometry(const StateMap& m, MetricKind metric, const RngStream& rng,
                              int pairs) {
  if (pairs < 1) throw Error(ErrorCode::InvalidParameter, "need at least one pair", pairs);
  const int n = m.dim();
  struct Slot {
    double deviation = -1.0;
    std::optional<DensityOperator> a, b;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(pairs));
  const bool concurrent = detail::parallel_for(pairs, m.concurrent_safe(), [&](int k) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(k));
    auto [a, b] = sample_domain_pair(m.domain(), n, sub);
    const double before = distance(metric, a, b);
    const double after = distance(metric, apply_map(m, a), apply_map(m, b));
    Slot& slot = slots[static_cast<std::size_t>(k)];
    slot.deviation = std::abs(after - before);
    slot.a = std::move(a);
    slot.b = std::move(b);
  });
  std::size_t worst = 0;
  for (std::size_t k = 1; k < slots.size(); ++k) {
    if (slots[k].deviation > slots[worst].deviation) worst = k;
  }
  return IsometryReport{.metric = metric,
                        .pairs_tested = pairs,
                        .max_deviation = slots[worst].deviation,
                        .worst_a = *slots[worst].a,
                        .worst_b = *slots[worst].b,
                        .seed = rng.seed(),
                        .ran_concurrently = concurrent};
}

double zero_image_distance(const StateMap& m, MetricKind metric) {
  if (m.domain() != MapDomain::FullDensity) {
    throw Error(ErrorCode::DomainError, "phi(0) is only defined for maps on the density cone");
  }
  const DensityOperator zero = DensityOperator::zero(m.dim());
  return distance(metric, apply_map(m, zero), zero);
}

bool zero_fixed_check(const StateMap& m, MetricKind metric, double tol) {
  return zero_image_distance(m, metric) <= tol;
}

double max_trace_gap(const StateMap& m, const RngStream& rng, int samples) {
  if (m.domain() != MapDomain::FullDensity) {
    throw Error(ErrorCode::DomainError, "trace check needs a map on the density cone");
  }
  double gap = 0.0;
  for (int k = 0; k < samples; ++k) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(k));
    const DensityOperator a = sample_domain_element(MapDomain::FullDensity, m.dim(), sub);
    gap = std::max(gap, std::abs(apply_map(m, a).trace() - a.trace()));
  }
  return gap;
}

bool trace_preservation_check(const StateMap& m, const RngStream& rng, int samples, double tol) {
  return max_trace_gap(m, rng, samples) <= tol;
}

bool PreservationReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.pass; });
}

const PropertyCheck* PreservationReport::find(std::string_view name) const {
  for (const PropertyCheck& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

PreservationReport preservation_suite(const StateMap& m, const RngStream& rng, int samples,
                                      double tol) {
  const int n = m.dim();
  const MapDomain domain = m.domain();
  const bool states = domain == MapDomain::StatesOnly;
  constexpr double kRankTol = 1e-8;
  PreservationReport report;

  auto run = [&](std::string name, std::uint64_t stream, bool exact, auto&& violation_of) {
    PropertyCheck check{.name = std::move(name), .instances = 0, .max_violation = 0.0, .pass = true};
    const RngStream base = rng.substream(stream);
    for (int k = 0; k < samples; ++k) {
      RngStream sub = base.substream(static_cast<std::uint64_t>(k));
      const std::optional<double> v = violation_of(sub);
      if (!v) continue;
      ++check.instances;
      check.max_violation = std::max(check.max_violation, *v);
    }
    check.pass = exact ? check.max_violation == 0.0 : check.max_violation <= tol;
    report.checks.push_back(std::move(check));
  };

  // Orthogonal pairs must stay orthogonal.
  run("orthogonality_forward", 0, false, [&](RngStream& r) -> std::optional<double> {
    if (n < 2) return std::nullopt;
    auto [x, y] = random_orthogonal_pair(n, states ? 1.0 : 0.2 + 1.8 * r.uniform(),
                                         states ? 1.0 : 0.2 + 1.8 * r.uniform(), r);
    const DensityOperator fx = apply_map(m, x);
    const DensityOperator fy = apply_map(m, y);
    return product_norm(fx, fy) / (1.0 + fx.trace() * fy.trace());
  });

  // Non-orthogonal pairs must stay non-orthogonal (1 per flipped pair).
  run("orthogonality_backward", 1, true, [&](RngStream& r) -> std::optional<double> {
    auto [x, y] = sample_domain_pair(domain, n, r);
    if (are_orthogonal(x, y, tol)) return std::nullopt;
    return are_orthogonal(apply_map(m, x), apply_map(m, y), tol) ? 1.0 : 0.0;
  });

  run("rank", 2, true, [&](RngStream& r) -> std::optional<double> {
    const DensityOperator a = sample_domain_element(domain, n, r);
    return std::abs(rank_of(apply_map(m, a), kRankTol) - rank_of(a, kRankTol));
  });

  run("affinity", 3, false, [&](RngStream& r) -> std::optional<double> {
    const DensityOperator a = sample_domain_element(domain, n, r);
    const DensityOperator b = sample_domain_element(domain, n, r);
    const double lambda = r.uniform();
    DensityOperator mix = lambda * a + (1.0 - lambda) * b;
    if (states) mix = (1.0 / mix.trace()) * mix;
    const DensityOperator images = lambda * apply_map(m, a) + (1.0 - lambda) * apply_map(m, b);
    return trace_distance(apply_map(m, mix), images);
  });

  if (!states) {
    run("zero_fixed", 4, false, [&](RngStream&) -> std::optional<double> {
      return zero_image_distance(m, MetricKind::TraceNorm);
    });
    run("trace", 5, false, [&](RngStream& r) -> std::optional<double> {
      const DensityOperator a = sample_domain_element(domain, n, r);
      return std::abs(apply_map(m, a).trace() - a.trace());
    });
  }
  return report;
}

// ---------------------------------------------------------------------------
// Reconstruction

StateMap ReconstructionResult::as_map(MapDomain domain) const {
  return StateMap::conjugation(kind, u, domain);
}

double phase_invariant_overlap(const Unitary& recovered, const Unitary& truth) {
  if (recovered.dim() != truth.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "unitaries of different dimension");
  }
  return std::abs((recovered.matrix().adjoint() * truth.matrix()).trace()) / recovered.dim();
}

namespace {

struct ProbeImage {
  Vector top;
  DensityOperator image;
};

ProbeImage probe(const StateMap& oracle, const Vector& v, const std::string& name,
                 double purity_tol) {
  const QuantumState input = PureState(v).as_projection();
  std::optional<DensityOperator> image;
  try {
    image = apply_map(oracle, input.density());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DomainError) throw;
    throw Error(ErrorCode::NotIsometryEvidence,
                "probe " + name + " left the state space: " + e.what(), e.value());
  }
  const Spectrum s = hermitian_eig(image->op());
  const int n = s.dim();
  const double tr = image->trace();
  const double second = n > 1 ? s.eigenvalues(n - 2) : 0.0;
  const double defect = std::max(std::abs(tr - 1.0), second);
  if (defect > purity_tol) {
    throw Error(ErrorCode::NotIsometryEvidence,
                "image of pure probe " + name + " is not a pure state (defect " +
                    std::to_string(defect) + ")",
                defect);
  }
  return ProbeImage{s.eigenvectors.col(n - 1), *image};
}

Vector basis_vector(int n, int i) {
  Vector e = Vector::Zero(n);
  e(i) = 1.0;
  return e;
}

// Largest-modulus component made real positive; first index wins ties.
Vector fix_global_phase(const Vector& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  const Complex c = v(best);
  return v * (std::conj(c) / std::abs(c));
}

}  // namespace

ReconstructionResult reconstruct_implementer(const StateMap& oracle, const RngStream& rng,
                                             const ReconstructionSettings& settings) {
  const int n = oracle.dim();
  if (oracle.domain() == MapDomain::FullDensity) {
    const double zero_gap = zero_image_distance(oracle, MetricKind::TraceNorm);
    if (zero_gap > settings.purity_tol) {
      throw Error(ErrorCode::NotIsometryEvidence, "map does not fix 0", zero_gap);
    }
    const double trace_gap = max_trace_gap(oracle, rng.substream(0), 20);
    if (trace_gap > settings.purity_tol) {
      throw Error(ErrorCode::NotIsometryEvidence, "map does not preserve the trace", trace_gap);
    }
  }
  const StateMap on_states = oracle.with_domain(MapDomain::StatesOnly);

  std::vector<Vector> columns;
  columns.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    columns.push_back(
        probe(on_states, basis_vector(n, i), "e" + std::to_string(i + 1), settings.purity_tol).top);
  }
  int probes = n;
  columns[0] = fix_global_phase(columns[0]);

  // (e_1 + e_i)/sqrt2 maps to (u_1 + w u_i)/sqrt2 with |w| = 1 under either
  // kind; <u_1| image |u_i> = conj(w)/2 recovers w.
  for (int i = 1; i < n; ++i) {
    const Vector f = (basis_vector(n, 0) + basis_vector(n, i)) / std::numbers::sqrt2;
    const ProbeImage img = probe(on_states, f, "e1+e" + std::to_string(i + 1), settings.purity_tol);
    ++probes;
    const Complex c = columns[0].dot(img.image.matrix() * columns[static_cast<std::size_t>(i)]);
    if (std::abs(c) < 0.25) {
      throw Error(ErrorCode::NotIsometryEvidence,
                  "superposition probe e1+e" + std::to_string(i + 1) + " lost its coherence",
                  std::abs(c));
    }
    columns[static_cast<std::size_t>(i)] *= std::conj(c) / std::abs(c);
  }

  // (e_1 + i e_2)/sqrt2 goes to (u_1 + i u_2)/sqrt2 under a unitary and to
  // (u_1 - i u_2)/sqrt2 under an antiunitary.
  ImplementerKind kind = ImplementerKind::Unitary;
  if (n >= 2) {
    const Complex i_unit(0.0, 1.0);
    const Vector g = (basis_vector(n, 0) + i_unit * basis_vector(n, 1)) / std::numbers::sqrt2;
    const ProbeImage img = probe(on_states, g, "e1+ie2", settings.purity_tol);
    ++probes;
    const Vector plus = (columns[0] + i_unit * columns[1]) / std::numbers::sqrt2;
    const Vector minus = (columns[0] - i_unit * columns[1]) / std::numbers::sqrt2;
    const double overlap_plus = plus.dot(img.image.matrix() * plus).real();
    const double overlap_minus = minus.dot(img.image.matrix() * minus).real();
    kind = overlap_plus >= overlap_minus ? ImplementerKind::Unitary : ImplementerKind::Antiunitary;
  }

  Matrix assembled(n, n);
  for (int i = 0; i < n; ++i) assembled.col(i) = columns[static_cast<std::size_t>(i)];
  ReconstructionResult result{
      .u = Unitary::nearest(assembled),
      .kind = kind,
      .residual = 0.0,
      .phase_convention =
          "column 1 scaled so its largest-modulus entry is real positive (lowest index on ties); "
          "column i fixed relative to column 1 by the (e1+ei)/sqrt2 probe",
      .probes = probes,
      .validation_states = settings.validation_states};

  const StateMap implemented = result.as_map(MapDomain::StatesOnly);
  const RngStream validation = rng.substream(1);
  int worst = -1;
  for (int k = 0; k < settings.validation_states; ++k) {
    RngStream sub = validation.substream(static_cast<std::uint64_t>(k));
    const DensityOperator a = sample_domain_element(MapDomain::StatesOnly, n, sub);
    double gap = 0.0;
    try {
      gap = trace_distance(apply_map(on_states, a), apply_map(implemented, a));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DomainError) throw;
      throw Error(ErrorCode::NotIsometryEvidence,
                  "validation state " + std::to_string(k) + " left the state space", e.value());
    }
    if (gap > result.residual) {
      result.residual = gap;
      worst = k;
    }
  }
  if (result.residual > settings.accept_tol) {
    throw Error(ErrorCode::NotImplementable,
                "validation residual " + std::to_string(result.residual) + " at state " +
                    std::to_string(worst) + " exceeds " + std::to_string(settings.accept_tol),
                result.residual);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Round trip

RoundtripReport theorem_roundtrip(ImplementerKind kind, int n, MapDomain domain,
                                  const RngStream& rng, const RoundtripSettings& settings) {
  RngStream unitary_stream = rng.substream(0);
  const Unitary truth = random_unitary(n, unitary_stream);
  const StateMap oracle = StateMap::conjugation(kind, truth, domain).as_oracle("hidden");

  RoundtripReport out{.true_kind = kind, .dim = n, .truth = truth, .reconstruction = {}, .failure = {}};
  out.bures_deviation =
      check_isometry(oracle, MetricKind::Bures, rng.substream(1), settings.isometry_pairs)
          .max_deviation;
  out.trace_deviation =
      check_isometry(oracle, MetricKind::TraceNorm, rng.substream(2), settings.isometry_pairs)
          .max_deviation;
  out.preservation_pass =
      preservation_suite(oracle, rng.substream(3), settings.preservation_samples).all_pass();

  try {
    out.reconstruction = reconstruct_implementer(oracle, rng.substream(4));
  } catch (const Error& e) {
    out.failure = e.what();
    return out;
  }
  const ReconstructionResult& rec = *out.reconstruction;
  // In dimension 1 both kinds induce the same (identity) map.
  out.kind_match = n == 1 || rec.kind == kind;
  out.overlap = phase_invariant_overlap(rec.u, truth);

  const StateMap implemented = rec.as_map(domain);
  const RngStream fresh = rng.substream(5);
  for (int k = 0; k < settings.fresh_states; ++k) {
    RngStream sub = fresh.substream(static_cast<std::uint64_t>(k));
    const DensityOperator a = sample_domain_element(domain, n, sub);
    out.fresh_residual =
        std::max(out.fresh_residual, trace_distance(apply_map(oracle, a), apply_map(implemented, a)));
  }
  out.pass = out.bures_deviation <= settings.isometry_tol &&
             out.trace_deviation <= settings.isometry_tol && out.preservation_pass &&
             out.kind_match && out.fresh_residual <= settings.residual_tol &&
             out.overlap >= 1.0 - settings.overlap_tol;
  if (!out.pass && out.failure.empty()) out.failure = "round trip check failed";
  return out;
}

}  // namespace qsm
