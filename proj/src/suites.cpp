#include "qsm/suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsm/geometry.hpp"

namespace qsm {

void Tolerances::set(std::string_view name, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidParameter, "tolerance must be positive", value);
  }
  if (name == "witness") witness = value;
  else if (name == "orthogonality") orthogonality = value;
  else if (name == "slack") slack = value;
  else if (name == "separation") separation = value;
  else if (name == "isometry") isometry = value;
  else if (name == "accept") accept = value;
  else if (name == "purity") purity = value;
  else throw Error(ErrorCode::InvalidParameter, "unknown tolerance '" + std::string(name) + "'");
}

json Tolerances::to_json() const {
  return json{{"witness", witness},       {"orthogonality", orthogonality},
              {"slack", slack},           {"separation", separation},
              {"isometry", isometry},     {"accept", accept},
              {"purity", purity}};
}

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{"lemma1",      "lemma3",      "thm-bures-D",
                                            "thm-bures-S", "thm-trace-D", "thm-trace-S",
                                            "ortho-eq"};
  return ids;
}

bool is_suite_id(std::string_view id) {
  const auto& ids = suite_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

namespace {

int random_rank(int n, RngStream& rng) {
  return 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
}

// ---------------------------------------------------------------------------
// 0 is the only center whose Bures balls all have diameter <= sqrt2 eps.

void bures_ball_suite(ExperimentReport& rep, int n, const SuiteConfig& cfg, const RngStream& rng) {
  const double tol = cfg.tol.witness;
  const std::vector<double> radii{0.5, 1.0, 2.0};
  double upper_excess = -std::numeric_limits<double>::infinity();
  double sharp_gap = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double eps = radii[i];
    RngStream sub = rng.substream(i);
    const DiameterEstimate est = bures_ball_diameter(
        BallSpec{MetricKind::Bures, DensityOperator::zero(n), eps}, sub, cfg.samples);
    upper_excess = std::max(upper_excess, est.max_sampled_distance - std::numbers::sqrt2 * eps);
    const double target = n >= 2 ? std::numbers::sqrt2 * eps : eps;
    sharp_gap = std::max(sharp_gap, std::abs(est.lower_bound - target));
    if (eps == 1.0) {
      rep.witnesses.push_back(json{{"kind", n >= 2 ? "sqrt2-pair" : "dim1-pair"},
                                   {"epsilon", eps},
                                   {"distance", est.lower_bound},
                                   {"X", to_json(est.witness_x.op())},
                                   {"Y", to_json(est.witness_y.op())}});
    }
  }
  rep.check_at_most("upper_bound_excess", upper_excess, tol);
  rep.check_at_most(n >= 2 ? "sharpness_gap" : "dim1_diameter_gap", sharp_gap, tol);

  // Converse: every nonzero center has a pair at distance 2 sqrt(tr A).
  const int centers = std::min(cfg.samples, 100);
  const RngStream conv = rng.substream(10);
  const std::vector<double> grid{0.5, 1.0, 2.0};
  double worst_witness = 0.0;
  int uncertified = 0;
  int misjudged = 0;
  for (int k = 0; k < centers; ++k) {
    RngStream sub = conv.substream(static_cast<std::uint64_t>(k));
    const DensityOperator a = random_density(n, random_rank(n, sub), 0.1 + 2.9 * sub.uniform(), sub);
    const CenterWitness w = nonzero_center_witness(a);
    uncertified += !w.certified;
    worst_witness = std::max(worst_witness, 2.0 * std::sqrt(a.trace()) - w.pair_distance);
    RngStream zsub = sub.substream(1);
    misjudged += zero_characterization_bures(a, grid, zsub, 20).is_zero;
  }
  rep.check_at_most("nonzero_center_witness_shortfall", worst_witness, tol);
  rep.check_true("nonzero_center_witness_certified", uncertified == 0,
                 json{{"centers", centers}, {"uncertified", uncertified}});
  rep.check_true("nonzero_centers_rejected", misjudged == 0,
                 json{{"centers", centers}, {"misjudged", misjudged}});
  RngStream zero_stream = rng.substream(11);
  rep.check_true("zero_center_accepted",
                 zero_characterization_bures(DensityOperator::zero(n), grid, zero_stream, cfg.samples)
                     .is_zero);
}

// ---------------------------------------------------------------------------
// Two d_1 balls touching at A meet only at A unless A = 0.

void touching_balls_suite(ExperimentReport& rep, int n, const SuiteConfig& cfg, const RngStream& rng) {
  const double tol = cfg.tol.witness;
  const int configs = std::max(1, cfg.samples / 10);
  rep.budget = cfg.budget;
  SearchSettings search;
  search.budget = cfg.budget;
  search.slack = cfg.tol.slack;

  if (n >= 2) {
    double worst = 0.0;
    double smallest_mid = std::numeric_limits<double>::infinity();
    const RngStream mids = rng.substream(0);
    for (int k = 0; k < configs; ++k) {
      RngStream sub = mids.substream(static_cast<std::uint64_t>(k));
      const double eps = 0.2 + 1.8 * sub.uniform();
      const auto [x, y] = random_orthogonal_pair(n, eps, eps, sub);
      const DensityOperator z = midpoint_witness_d1(x, y);
      worst = std::max({worst, std::abs(trace_distance(x, z) - eps),
                        std::abs(trace_distance(y, z) - eps)});
      smallest_mid = std::min(smallest_mid, trace_norm(z.op()) / eps);
    }
    rep.check_at_most("midpoint_ball_gap", worst, tol);
    rep.check_true("midpoint_nonzero", smallest_mid >= 0.5, json{{"min_norm_over_eps", smallest_mid}});

    // Control: at A = 0 the search must find points well away from A.
    RngStream ctrl = rng.substream(1);
    const double eps = 1.0;
    const auto [x, y] = random_orthogonal_pair(n, eps, eps, ctrl);
    SearchSettings short_search = search;
    short_search.budget = std::min(cfg.budget, 1000);
    const IntersectionSearchResult r =
        intersection_uniqueness_search(x, y, DensityOperator::zero(n), eps, ctrl, short_search);
    rep.check_true("zero_center_control_separation", r.separation_from_a >= 0.5 * eps,
                   json{{"separation", r.separation_from_a}, {"epsilon", eps}});
  }

  double worst_config = 0.0;
  double worst_sep = 0.0;
  double worst_extreme = 0.0;
  double worst_ball = 0.0;
  json worst_witness;
  const RngStream pinches = rng.substream(2);
  for (int k = 0; k < configs; ++k) {
    RngStream sub = pinches.substream(static_cast<std::uint64_t>(k));
    const DensityOperator a = random_density(n, random_rank(n, sub), 0.2 + 1.8 * sub.uniform(), sub);
    const PinchConfiguration pc = pinch_configuration(a, sub);
    const double eps = pc.epsilon;
    worst_config = std::max({worst_config, std::abs(trace_distance(pc.x, a) - eps),
                             std::abs(trace_distance(pc.y, a) - eps),
                             std::abs(trace_distance(pc.x, pc.y) - 2.0 * eps)});
    const IntersectionSearchResult r =
        intersection_uniqueness_search(pc.x, pc.y, a, eps, sub, search);
    worst_ball = std::max(worst_ball, r.max_ball_violation);
    if (r.separation_from_a / eps > worst_sep || worst_witness.is_null()) {
      worst_sep = r.separation_from_a / eps;
      worst_witness = json{{"kind", "uniqueness-search"},
                           {"config", k},
                           {"epsilon", eps},
                           {"separation", r.separation_from_a},
                           {"accepted", r.accepted},
                           {"proposals", r.proposals},
                           {"final_scale", r.final_scale},
                           // Off-diagonal feasible points reach 2 sqrt(slack eps / 2).
                           {"slack_envelope", 2.0 * std::sqrt(search.slack * eps / 2.0)}};
    }
    worst_extreme = std::max(worst_extreme, r.max_extreme_point_deviation / eps);
  }
  rep.witnesses.push_back(worst_witness);
  rep.check_at_most("pinch_configuration_gap", worst_config, tol);
  rep.check_at_most("search_ball_violation", worst_ball, cfg.tol.slack);
  rep.check_at_most("relative_separation", worst_sep, cfg.tol.separation);
  rep.check_at_most("relative_extreme_point_deviation", worst_extreme, cfg.tol.separation);
}

// ---------------------------------------------------------------------------
// Isometries are conjugations.

void negative_controls(ExperimentReport& rep, int n, MetricKind metric, MapDomain domain,
                       const SuiteConfig& cfg, const RngStream& rng) {
  std::vector<StateMap> controls;
  if (n >= 2) {
    controls.push_back(named_nonisometry(NamedMap::Depolarizing, n, 0.5));
    controls.push_back(named_nonisometry(NamedMap::Pinching, n));
  }
  if (domain == MapDomain::FullDensity) {
    controls.push_back(named_nonisometry(NamedMap::TraceRescale, n, 2.0));
  }
  json summary = json::array();
  bool all_rejected = true;
  for (std::size_t i = 0; i < controls.size(); ++i) {
    const StateMap m = controls[i].with_domain(domain);
    const double dev = check_isometry(m, metric, rng.substream(i), cfg.samples).max_deviation;
    std::string verdict = "accepted";
    try {
      reconstruct_implementer(m, rng.substream(100 + i));
    } catch (const Error& e) {
      verdict = to_string(e.code());
    }
    // The property each control is expected to break.
    const PreservationReport props = preservation_suite(m, rng.substream(200 + i), 50);
    const char* predicted = *controls[i].named() == NamedMap::TraceRescale ? "trace" : "rank";
    const bool broken = !props.find(predicted)->pass;
    const bool rejected = dev >= 10.0 * cfg.tol.accept && verdict != "accepted" && broken;
    all_rejected = all_rejected && rejected;
    summary.push_back(json{{"map", m.label()},
                           {"max_deviation", dev},
                           {"reconstruction", verdict},
                           {"broken_property", predicted},
                           {"property_violated", broken}});
  }
  rep.check_true("negative_controls_rejected", all_rejected, summary);
}

void roundtrips(ExperimentReport& rep, int n, MapDomain domain, const SuiteConfig& cfg,
                const RngStream& rng) {
  RoundtripSettings settings;
  settings.isometry_pairs = cfg.samples;
  settings.isometry_tol = cfg.tol.isometry;
  settings.residual_tol = cfg.tol.accept;
  settings.overlap_tol = cfg.tol.isometry;
  double bures_dev = 0.0, trace_dev = 0.0, residual = 0.0, overlap_gap = 0.0;
  bool preservation = true, kinds = true;
  std::string failure;
  for (int k = 0; k < 2; ++k) {
    const ImplementerKind kind = k == 0 ? ImplementerKind::Unitary : ImplementerKind::Antiunitary;
    const RoundtripReport r = theorem_roundtrip(kind, n, domain, rng.substream(k), settings);
    bures_dev = std::max(bures_dev, r.bures_deviation);
    trace_dev = std::max(trace_dev, r.trace_deviation);
    preservation = preservation && r.preservation_pass;
    if (!r.reconstruction) {
      failure = r.failure;
      kinds = false;
      continue;
    }
    kinds = kinds && r.kind_match;
    residual = std::max(residual, r.fresh_residual);
    overlap_gap = std::max(overlap_gap, 1.0 - r.overlap);
    rep.witnesses.push_back(json{{"kind", "reconstruction"},
                                 {"true_kind", to_string(kind)},
                                 {"recovered_kind", to_string(r.reconstruction->kind)},
                                 {"validation_residual", r.reconstruction->residual},
                                 {"fresh_residual", r.fresh_residual},
                                 {"overlap", r.overlap},
                                 {"probes", r.reconstruction->probes}});
  }
  rep.check_at_most("bures_isometry_deviation", bures_dev, cfg.tol.isometry);
  rep.check_at_most("trace_isometry_deviation", trace_dev, cfg.tol.isometry);
  rep.check_true("preservation_suite", preservation);
  rep.check_true("kind_recovered", kinds, failure.empty() ? json() : json(failure));
  rep.check_at_most("reconstruction_residual", residual, cfg.tol.accept);
  rep.check_at_most("unitary_overlap_gap", overlap_gap, cfg.tol.isometry);
}

StateMap hidden_isometry(int n, MapDomain domain, const RngStream& rng) {
  RngStream sub = rng.substream(0);
  const ImplementerKind kind =
      sub.below(2) == 0 ? ImplementerKind::Unitary : ImplementerKind::Antiunitary;
  return StateMap::conjugation(kind, random_unitary(n, sub), domain).as_oracle("hidden");
}

void bures_extras(ExperimentReport& rep, int n, MapDomain domain, const SuiteConfig& cfg,
                  const RngStream& rng) {
  const StateMap phi = hidden_isometry(n, domain, rng.substream(0));
  const int count = std::min(cfg.samples, 100);
  double fidelity_gap = 0.0;
  double trace_gap = 0.0;
  const RngStream pairs = rng.substream(1);
  for (int k = 0; k < count; ++k) {
    RngStream sub = pairs.substream(static_cast<std::uint64_t>(k));
    const auto [a, b] = sample_domain_pair(domain, n, sub);
    const DensityOperator fa = phi(a);
    fidelity_gap = std::max(fidelity_gap, std::abs(fidelity(fa, phi(b)) - fidelity(a, b)));
    if (domain == MapDomain::FullDensity) {
      // tr A = d_b(A, 0)^2, carried over by the isometry.
      const double db = bures_distance(fa, DensityOperator::zero(n));
      trace_gap = std::max(trace_gap, std::abs(db * db - a.trace()));
    }
  }
  rep.check_at_most("fidelity_preservation", fidelity_gap, cfg.tol.isometry);
  if (domain == MapDomain::FullDensity) {
    rep.check_at_most("trace_via_distance_to_zero", trace_gap, cfg.tol.isometry);
    RngStream zs = rng.substream(2);
    const std::vector<double> grid{0.5, 1.0, 2.0};
    const DensityOperator image_of_zero = phi(DensityOperator::zero(n));
    rep.check_true("image_of_zero_is_zero",
                   zero_characterization_bures(image_of_zero, grid, zs, 50).is_zero);
  }
}

void trace_density_extras(ExperimentReport& rep, int n, const SuiteConfig& cfg,
                          const RngStream& rng) {
  const StateMap phi = hidden_isometry(n, MapDomain::FullDensity, rng.substream(0));
  const int count = std::min(cfg.samples, 100);
  const double otol = cfg.tol.orthogonality;

  // Rank through the double orthocomplement, before and after the map.
  int disagreements = 0;
  const RngStream ranks = rng.substream(1);
  for (int k = 0; k < count; ++k) {
    RngStream sub = ranks.substream(static_cast<std::uint64_t>(k));
    const int rank = static_cast<int>(sub.below(static_cast<std::uint64_t>(n + 1)));
    const DensityOperator a =
        rank == 0 ? DensityOperator::zero(n) : random_density(n, rank, 0.2 + 1.8 * sub.uniform(), sub);
    const std::vector<DensityOperator> pool = orthocomplement_pool(a, 10 * n, sub);
    std::vector<DensityOperator> image_pool;
    image_pool.reserve(pool.size());
    for (const DensityOperator& p : pool) image_pool.push_back(phi(p));
    const int spectral = rank_of(a, otol);
    disagreements += double_orthocomplement_rank(a, pool, otol) != spectral;
    disagreements += double_orthocomplement_rank(phi(a), image_pool, otol) != spectral;
  }
  rep.check_true("rank_via_double_orthocomplement", disagreements == 0,
                 json{{"instances", count}, {"disagreements", disagreements}});

  // psi(T) = phi(T+) - phi(T-) is linear on self-adjoint operators.
  double linearity = 0.0;
  const RngStream lin = rng.substream(2);
  auto psi = [&](const HermitianOperator& t) {
    const PosNegParts parts = pos_neg_parts(t);
    return phi(DensityOperator::project(parts.positive)).op() -
           phi(DensityOperator::project(parts.negative)).op();
  };
  for (int k = 0; k < count; ++k) {
    RngStream sub = lin.substream(static_cast<std::uint64_t>(k));
    const HermitianOperator t = random_hermitian(n, sub);
    const HermitianOperator s = random_hermitian(n, sub);
    const double alpha = 2.0 * sub.uniform() - 1.0;
    const double beta = 2.0 * sub.uniform() - 1.0;
    const HermitianOperator lhs = psi(alpha * t + beta * s);
    const HermitianOperator rhs = alpha * psi(t) + beta * psi(s);
    const double scale = 1.0 + trace_norm(t) + trace_norm(s);
    linearity = std::max(linearity, trace_norm(lhs - rhs) / scale);
  }
  rep.check_at_most("psi_linearity", linearity, cfg.tol.isometry);
}

void trace_state_extras(ExperimentReport& rep, int n, const SuiteConfig& cfg,
                        const RngStream& rng) {
  const StateMap phi = hidden_isometry(n, MapDomain::StatesOnly, rng.substream(0));
  const int count = std::min(cfg.samples, 100);
  const HermitianOperator shift = (1.0 / n) * HermitianOperator::identity(n);

  int membership_changes = 0;
  const RngStream khn = rng.substream(1);
  for (int k = 0; k < count; ++k) {
    RngStream sub = khn.substream(static_cast<std::uint64_t>(k));
    const bool pure = k % 2 == 1;
    const DensityOperator rho =
        pure ? random_pure_state(n, sub).as_projection().density() : random_state(n, n, sub).density();
    const KhnMembership before = khn_membership(rho.op() - shift, n);
    const KhnMembership after = khn_membership(phi(rho).op() - shift, n);
    membership_changes += before != after;
  }
  rep.check_true("shifted_state_space_membership_preserved", membership_changes == 0,
                 json{{"instances", count}, {"changes", membership_changes}});

  int misclassified = 0;
  const RngStream ortho = rng.substream(2);
  for (int k = 0; k < count; ++k) {
    RngStream sub = ortho.substream(static_cast<std::uint64_t>(k));
    const auto [x, y] = sample_domain_pair(MapDomain::StatesOnly, n, sub);
    const bool orth = are_orthogonal(x, y, cfg.tol.orthogonality);
    const bool image_far = std::abs(trace_distance(phi(x), phi(y)) - 2.0) <= cfg.tol.witness;
    misclassified += orth != image_far;
  }
  rep.check_true("orthogonality_iff_distance_two_after_map", misclassified == 0,
                 json{{"instances", count}, {"misclassified", misclassified}});
}

void isometry_suite(ExperimentReport& rep, int n, MetricKind metric, MapDomain domain,
             const SuiteConfig& cfg, const RngStream& rng) {
  roundtrips(rep, n, domain, cfg, rng.substream(0));
  negative_controls(rep, n, metric, domain, cfg, rng.substream(1));
  if (metric == MetricKind::Bures) {
    bures_extras(rep, n, domain, cfg, rng.substream(2));
  } else if (domain == MapDomain::FullDensity) {
    trace_density_extras(rep, n, cfg, rng.substream(2));
  } else {
    trace_state_extras(rep, n, cfg, rng.substream(2));
  }
}

// ---------------------------------------------------------------------------
// XY = 0 <=> ||X - Y||_1 = ||X + Y||_1.

void ortho_eq(ExperimentReport& rep, int n, const SuiteConfig& cfg, const RngStream& rng) {
  const double tol = cfg.tol.orthogonality;
  int misclassified = 0, additivity_mismatch = 0, state_mismatch = 0, orthogonal_pairs = 0;
  double worst_negative_gap = 0.0;
  for (int k = 0; k < cfg.samples; ++k) {
    RngStream sub = rng.substream(static_cast<std::uint64_t>(k));
    const bool states = sub.below(2) == 0;
    const bool make_orthogonal = n >= 2 && sub.below(2) == 0;
    std::optional<DensityOperator> x, y;
    if (make_orthogonal) {
      auto pair = random_orthogonal_pair(n, states ? 1.0 : 0.2 + 1.8 * sub.uniform(),
                                         states ? 1.0 : 0.2 + 1.8 * sub.uniform(), sub);
      x = std::move(pair.first);
      y = std::move(pair.second);
    } else {
      auto pair = sample_domain_pair(states ? MapDomain::StatesOnly : MapDomain::FullDensity, n, sub);
      x = std::move(pair.first);
      y = std::move(pair.second);
    }
    const double scale = 1.0 + x->trace() + y->trace();
    const bool op_side = are_orthogonal(*x, *y, tol);
    const bool metric_side = norm_identity_gap(*x, *y) <= tol * scale;
    const double gap = additivity_gap(*x, *y);
    worst_negative_gap = std::max(worst_negative_gap, -gap);
    orthogonal_pairs += op_side;
    misclassified += op_side != metric_side;
    additivity_mismatch += op_side != (gap <= tol * scale);
    if (states) {
      state_mismatch += op_side != (std::abs(trace_distance(*x, *y) - 2.0) <= cfg.tol.witness);
    }
  }
  rep.witnesses.push_back(json{{"kind", "pair-mix"},
                               {"pairs", cfg.samples},
                               {"orthogonal_pairs", orthogonal_pairs}});
  rep.check_true("norm_identity_equivalence", misclassified == 0,
                 json{{"misclassified", misclassified}});
  rep.check_true("additivity_equivalence", additivity_mismatch == 0,
                 json{{"misclassified", additivity_mismatch}});
  rep.check_true("states_distance_two_equivalence", state_mismatch == 0,
                 json{{"misclassified", state_mismatch}});
  rep.check_at_most("negative_additivity_gap", worst_negative_gap, cfg.tol.witness);
}

}  // namespace

ExperimentReport run_suite(std::string_view id, int dim, const SuiteConfig& cfg) {
  if (!is_suite_id(id)) {
    throw Error(ErrorCode::InvalidParameter, "unknown suite '" + std::string(id) + "'");
  }
  if (dim < 1) throw Error(ErrorCode::InvalidParameter, "dimension must be >= 1", dim);
  if (cfg.samples < 1) throw Error(ErrorCode::InvalidParameter, "samples must be >= 1");
  ExperimentReport rep;
  rep.lemma = std::string(id);
  rep.dim = dim;
  rep.seed = cfg.seed;
  const RngStream rng(cfg.seed, static_cast<std::uint64_t>(dim));

  if (id == "lemma1") bures_ball_suite(rep, dim, cfg, rng);
  else if (id == "lemma3") touching_balls_suite(rep, dim, cfg, rng);
  else if (id == "thm-bures-D") isometry_suite(rep, dim, MetricKind::Bures, MapDomain::FullDensity, cfg, rng);
  else if (id == "thm-bures-S") isometry_suite(rep, dim, MetricKind::Bures, MapDomain::StatesOnly, cfg, rng);
  else if (id == "thm-trace-D") isometry_suite(rep, dim, MetricKind::TraceNorm, MapDomain::FullDensity, cfg, rng);
  else if (id == "thm-trace-S") isometry_suite(rep, dim, MetricKind::TraceNorm, MapDomain::StatesOnly, cfg, rng);
  else ortho_eq(rep, dim, cfg, rng);

  rep.pass = rep.all_checks_pass();
  return rep;
}

json run_verification(std::string_view id, std::span<const int> dims, const SuiteConfig& cfg) {
  std::vector<int> sorted(dims.begin(), dims.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  json reports = json::array();
  bool pass = true;
  for (int n : sorted) {
    const ExperimentReport r = run_suite(id, n, cfg);
    pass = pass && r.pass;
    reports.push_back(to_json(r));
  }
  return json{{"schema", kReportSchema},
              {"suite", std::string(id)},
              {"config",
               json{{"seed", cfg.seed},
                    {"dims", sorted},
                    {"samples", cfg.samples},
                    {"budget", cfg.budget},
                    {"tolerances", cfg.tol.to_json()}}},
              {"pass", pass},
              {"reports", std::move(reports)}};
}

}  // namespace qsm
