#include "qsm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace qsm {

namespace {

constexpr double kZeroTrace = 1e-12;
constexpr double kWitnessTol = 1e-9;

bool is_zero(const DensityOperator& a) { return a.trace() <= kZeroTrace; }

DensityOperator basis_projection(int n, int k, double weight) {
  Matrix m = Matrix::Zero(n, n);
  m(k, k) = weight;
  return DensityOperator(HermitianOperator(m));
}

// Random member of the density cone with trace in [0, max_trace]; a quarter
// of the draws sit on the sphere tr = max_trace.
DensityOperator sample_trace_bounded(int n, double max_trace, RngStream& rng) {
  const int rank = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  const double u = rng.below(4) == 0 ? 1.0 : rng.uniform();
  if (u <= 0.0) return DensityOperator::zero(n);
  return random_density(n, rank, u * max_trace, rng);
}

}  // namespace

bool in_ball(const BallSpec& ball, const DensityOperator& x, double slack) {
  return distance(ball.metric, ball.center, x) <= ball.radius + slack;
}

DiameterEstimate bures_ball_diameter(const BallSpec& ball, RngStream& rng, int samples) {
  if (ball.metric != MetricKind::Bures) {
    throw Error(ErrorCode::InvalidParameter, "bures_ball_diameter needs a Bures ball");
  }
  if (!(ball.radius > 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "ball radius must be positive", ball.radius);
  }
  const int n = ball.center.dim();
  const double eps = ball.radius;
  DiameterEstimate est{.lower_bound = 0.0,
                       .witness_x = ball.center,
                       .witness_y = ball.center,
                       .samples_used = 0,
                       .max_sampled_distance = 0.0,
                       .analytic_witness = false};

  auto consider = [&](const DensityOperator& x, const DensityOperator& y, bool analytic) {
    const double d = bures_distance(x, y);
    if (!analytic) est.max_sampled_distance = std::max(est.max_sampled_distance, d);
    if (d > est.lower_bound) {
      est.lower_bound = d;
      est.witness_x = x;
      est.witness_y = y;
      est.analytic_witness = analytic;
    }
  };

  if (is_zero(ball.center)) {
    // d_b(X, 0) = sqrt(tr X), so membership is a trace condition.
    const double max_trace = eps * eps;
    for (int k = 0; k < samples; ++k) {
      const DensityOperator x = sample_trace_bounded(n, max_trace, rng);
      const DensityOperator y = sample_trace_bounded(n, max_trace, rng);
      consider(x, y, false);
      ++est.samples_used;
    }
    if (n >= 2) {
      consider(basis_projection(n, 0, max_trace), basis_projection(n, 1, max_trace), true);
    } else {
      consider(basis_projection(1, 0, max_trace), DensityOperator::zero(1), true);
    }
    return est;
  }

  // Nonzero center: rejection-sample around the center, then add the pair
  // at the two ends of the ray {tA : t >= 0} inside the ball.
  const double tr_a = ball.center.trace();
  const double root_tr = std::sqrt(tr_a);
  const double reach = (root_tr + eps) * (root_tr + eps);
  std::vector<DensityOperator> members;
  members.reserve(static_cast<std::size_t>(samples));
  for (int tries = 0; tries < 4 * samples && static_cast<int>(members.size()) < samples; ++tries) {
    DensityOperator cand = DensityOperator::zero(n);
    if (rng.below(2) == 0) {
      HermitianOperator step = random_hermitian(n, rng);
      step *= eps * rng.uniform() / trace_norm(step);
      cand = DensityOperator::project(ball.center.op() + step);
    } else {
      cand = sample_trace_bounded(n, reach, rng);
    }
    if (in_ball(ball, cand, 0.0)) members.push_back(std::move(cand));
  }
  est.samples_used = static_cast<int>(members.size());
  for (std::size_t k = 0; k + 1 < members.size(); k += 2) consider(members[k], members[k + 1], false);

  const double r = eps / root_tr;
  const double t_lo = std::pow(std::max(0.0, 1.0 - r), 2);
  const double t_hi = (1.0 + r) * (1.0 + r);
  const DensityOperator lo = t_lo * ball.center;
  const DensityOperator hi = t_hi * ball.center;
  if (in_ball(ball, lo, kWitnessTol) && in_ball(ball, hi, kWitnessTol)) consider(lo, hi, true);
  return est;
}

CenterWitness nonzero_center_witness(const DensityOperator& a) {
  const double tr_a = a.trace();
  if (tr_a <= kZeroTrace) {
    throw Error(ErrorCode::ZeroCenter, "witness pair needs a nonzero center", tr_a);
  }
  const int n = a.dim();
  CenterWitness w{.epsilon = std::sqrt(tr_a),
                  .zero = DensityOperator::zero(n),
                  .scaled = 4.0 * a,
                  .distance_to_zero = 0.0,
                  .distance_to_scaled = 0.0,
                  .pair_distance = 0.0,
                  .certified = false};
  w.distance_to_zero = bures_distance(a, w.zero);
  w.distance_to_scaled = bures_distance(a, w.scaled);
  w.pair_distance = bures_distance(w.zero, w.scaled);
  w.certified = w.distance_to_zero <= w.epsilon + kWitnessTol &&
                w.distance_to_scaled <= w.epsilon + kWitnessTol &&
                std::abs(w.pair_distance - 2.0 * w.epsilon) <= kWitnessTol;
  return w;
}

ZeroCharacterization zero_characterization_bures(const DensityOperator& a,
                                                 std::span<const double> radii, RngStream& rng,
                                                 int samples) {
  if (radii.empty()) throw Error(ErrorCode::InvalidParameter, "radius grid is empty");
  ZeroCharacterization out;
  out.radii_tested.assign(radii.begin(), radii.end());
  for (double r : radii) {
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidParameter, "radii must be positive", r);
  }
  std::optional<CenterWitness> witness;
  if (!is_zero(a)) {
    witness = nonzero_center_witness(a);
    const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
    if (witness->epsilon >= *lo && witness->epsilon <= *hi &&
        std::find(radii.begin(), radii.end(), witness->epsilon) == radii.end()) {
      out.radii_tested.push_back(witness->epsilon);
    }
  }
  out.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.radii_tested.size(); ++i) {
    const double r = out.radii_tested[i];
    RngStream sub = rng.substream(i);
    double diameter =
        bures_ball_diameter(BallSpec{MetricKind::Bures, a, r}, sub, samples).lower_bound;
    if (witness && r == witness->epsilon && witness->certified) {
      diameter = std::max(diameter, witness->pair_distance);
    }
    const double excess = diameter - std::numbers::sqrt2 * r;
    if (excess > out.max_excess) {
      out.max_excess = excess;
      out.worst_radius = r;
    }
  }
  out.is_zero = out.max_excess <= kWitnessTol;
  return out;
}

DensityOperator midpoint_witness_d1(const DensityOperator& x, const DensityOperator& y) {
  require_same_dim(x.op(), y.op());
  const double eps = trace_norm(x.op());
  const double tol = kWitnessTol * std::max(1.0, eps);
  if (!(eps > kZeroTrace)) {
    throw Error(ErrorCode::InvalidConfiguration, "X must be nonzero", eps);
  }
  const double norm_y = trace_norm(y.op());
  if (std::abs(norm_y - eps) > tol) {
    throw Error(ErrorCode::InvalidConfiguration,
                "||Y||_1 = " + std::to_string(norm_y) + " differs from ||X||_1 = " +
                    std::to_string(eps),
                norm_y - eps);
  }
  const double gap = trace_distance(x, y);
  if (std::abs(gap - 2.0 * eps) > tol) {
    throw Error(ErrorCode::InvalidConfiguration,
                "||X - Y||_1 = " + std::to_string(gap) + " is not 2 eps", gap - 2.0 * eps);
  }
  return 0.5 * (x + y);
}

PinchConfiguration pinch_configuration(const DensityOperator& a, RngStream& rng) {
  if (is_zero(a)) throw Error(ErrorCode::ZeroCenter, "pinch needs a nonzero center", a.trace());
  const int n = a.dim();
  const Spectrum s = hermitian_eig(a.op());
  const double top = s.eigenvalues(n - 1);
  const double tie = 1e-12 * (1.0 + top);
  Vector v = Vector::Zero(n);
  int ties = 0;
  for (int i = n - 1; i >= 0 && top - s.eigenvalues(i) <= tie; --i) ++ties;
  if (ties == 1) {
    v = s.eigenvectors.col(n - 1);
  } else {
    for (int i = n - ties; i < n; ++i) v += rng.complex_normal() * s.eigenvectors.col(i);
  }
  const PureState pure(v);
  QuantumState projection = pure.as_projection();
  const double eps = 0.5 * top;
  DensityOperator x = a + eps * projection.density();
  DensityOperator y(a.op() - eps * projection.op());
  return PinchConfiguration{.epsilon = eps,
                            .projection = std::move(projection),
                            .center = a,
                            .x = std::move(x),
                            .y = std::move(y)};
}

IntersectionSearchResult intersection_uniqueness_search(const DensityOperator& x,
                                                        const DensityOperator& y,
                                                        const DensityOperator& a, double epsilon,
                                                        RngStream& rng,
                                                        const SearchSettings& settings) {
  require_same_dim(x.op(), y.op());
  require_same_dim(x.op(), a.op());
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidParameter, "eps must be positive", epsilon);
  const int n = a.dim();
  const double limit = epsilon + settings.slack;
  const HermitianOperator half_gap = 0.5 * (x.op() - y.op());

  IntersectionSearchResult res{.best_candidate = a,
                               .separation_from_a = 0.0,
                               .max_ball_violation = -std::numeric_limits<double>::infinity(),
                               .max_extreme_point_deviation = 0.0,
                               .proposals = 0,
                               .accepted = 0,
                               .final_scale = settings.initial_scale_factor * epsilon};

  DensityOperator current = a;
  double current_sep = 0.0;

  // Returns false when z is outside either ball.
  auto visit = [&](const DensityOperator& z, double& sep_out) {
    const double dx = trace_distance(x, z);
    if (dx > limit) return false;
    const double dy = trace_distance(y, z);
    if (dy > limit) return false;
    sep_out = trace_distance(z, a);
    res.max_ball_violation = std::max(res.max_ball_violation, std::max(dx, dy) - epsilon);
    res.max_extreme_point_deviation =
        std::max(res.max_extreme_point_deviation, trace_norm((x.op() - z.op()) - half_gap));
    return true;
  };
  auto record = [&](const DensityOperator& z, double sep) {
    current = z;
    current_sep = sep;
    if (sep > res.separation_from_a) {
      res.separation_from_a = sep;
      res.best_candidate = z;
    }
  };

  double sep = 0.0;
  if (visit(a, sep)) record(a, sep);
  const DensityOperator mid = 0.5 * (x + y);
  if (visit(mid, sep)) record(mid, sep);

  double scale = settings.initial_scale_factor * epsilon;
  int rejections = 0;
  for (int k = 0; k < settings.budget; ++k) {
    ++res.proposals;
    HermitianOperator step = random_hermitian(n, rng);
    step *= scale / trace_norm(step);
    const DensityOperator cand = DensityOperator::project(current.op() + step);
    bool accept = visit(cand, sep);
    if (accept && sep < current_sep) {
      accept = rng.uniform() < std::exp((sep - current_sep) / scale);
    }
    if (accept) {
      ++res.accepted;
      record(cand, sep);
    } else if (++rejections % settings.rejections_per_cooling == 0) {
      scale *= settings.cooling;
    }
  }
  res.final_scale = scale;
  return res;
}

int double_orthocomplement_rank(const DensityOperator& a, std::span<const DensityOperator> pool,
                                double tol) {
  if (pool.empty()) throw Error(ErrorCode::InvalidPool, "orthocomplement pool is empty");
  for (const DensityOperator& b : pool) require_same_dim(a.op(), b.op());

  std::vector<std::size_t> perp;
  for (std::size_t j = 0; j < pool.size(); ++j) {
    if (are_orthogonal(a, pool[j], tol)) perp.push_back(j);
  }
  std::vector<std::size_t> perp_perp;
  for (std::size_t k = 0; k < pool.size(); ++k) {
    const bool all = std::all_of(perp.begin(), perp.end(), [&](std::size_t j) {
      return are_orthogonal(pool[k], pool[j], tol);
    });
    if (all) perp_perp.push_back(k);
  }
  std::vector<std::size_t> family;
  for (std::size_t k : perp_perp) {
    if (pool[k].trace() <= tol) continue;
    const bool fits = std::all_of(family.begin(), family.end(), [&](std::size_t j) {
      return are_orthogonal(pool[k], pool[j], tol);
    });
    if (fits) family.push_back(k);
  }
  return static_cast<int>(family.size());
}

std::vector<DensityOperator> orthocomplement_pool(const DensityOperator& a, int extra,
                                                  RngStream& rng) {
  const int n = a.dim();
  const Spectrum s = hermitian_eig(a.op());
  std::vector<DensityOperator> pool;
  pool.reserve(static_cast<std::size_t>(n + extra));
  for (int i = n - 1; i >= 0; --i) {
    pool.push_back(PureState(s.eigenvectors.col(i)).as_projection().density());
  }
  for (int k = 0; k < extra; ++k) {
    const int rank = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    pool.push_back(random_density(n, rank, 0.5 + rng.uniform(), rng));
  }
  return pool;
}

const char* to_string(KhnMembership m) {
  switch (m) {
    case KhnMembership::Interior: return "interior";
    case KhnMembership::Boundary: return "boundary";
    case KhnMembership::Outside: return "outside";
  }
  return "unknown";
}

KhnMembership khn_membership(const HermitianOperator& t, int n) {
  if (t.dim() != n) {
    throw Error(ErrorCode::DimensionMismatch, "operator dim differs from n");
  }
  const double tr = trace(t);
  if (std::abs(tr) > 1e-10) throw Error(ErrorCode::NotTraceZero, "operator has nonzero trace", tr);
  const Spectrum s = hermitian_eig(t);
  const double lo = -1.0 / n;
  const double hi = 1.0 - 1.0 / n;
  const double band = 1e-9;
  const double min_ev = s.eigenvalues(0);
  const double max_ev = s.eigenvalues(n - 1);
  if (min_ev < lo - band || max_ev > hi + band) return KhnMembership::Outside;
  if (min_ev > lo + band && max_ev < hi - band) return KhnMembership::Interior;
  return KhnMembership::Boundary;
}

}  // namespace qsm
