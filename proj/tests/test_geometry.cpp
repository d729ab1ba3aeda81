#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qsm/geometry.hpp"

using namespace qsm;

namespace {

DensityOperator diag(std::vector<double> d) { return DensityOperator(HermitianOperator::diagonal(d)); }

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("ball membership") {
  const BallSpec ball{MetricKind::TraceNorm, diag({0.5, 0.5}), 0.2};
  CHECK(in_ball(ball, diag({0.6, 0.4})));
  CHECK_FALSE(in_ball(ball, diag({0.7, 0.3})));
}

TEST_CASE("Bures ball about zero has diameter sqrt2 eps") {
  RngStream rng(1);
  for (int n : {2, 3, 5}) {
    for (double eps : {0.3, 1.0, 2.5}) {
      const DiameterEstimate est =
          bures_ball_diameter(BallSpec{MetricKind::Bures, DensityOperator::zero(n), eps}, rng, 300);
      CHECK(est.analytic_witness);
      CHECK(est.lower_bound == doctest::Approx(std::numbers::sqrt2 * eps).epsilon(1e-12));
      CHECK(est.max_sampled_distance <= std::numbers::sqrt2 * eps + 1e-9);
      CHECK(est.witness_x.trace() == doctest::Approx(eps * eps));
    }
  }
}

TEST_CASE("in dimension one the Bures ball about zero has diameter eps") {
  RngStream rng(2);
  const DiameterEstimate est =
      bures_ball_diameter(BallSpec{MetricKind::Bures, DensityOperator::zero(1), 0.7}, rng, 200);
  CHECK(est.lower_bound == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(est.max_sampled_distance <= 0.7 + 1e-9);
}

TEST_CASE("nonzero centers admit a pair at distance 2 sqrt(tr A)") {
  const CenterWitness w = nonzero_center_witness(diag({0.3, 0.2}));
  CHECK(w.certified);
  CHECK(w.epsilon == doctest::Approx(std::sqrt(0.5)));
  CHECK(w.pair_distance == doctest::Approx(2.0 * std::sqrt(0.5)).epsilon(1e-12));
  CHECK(w.distance_to_zero == doctest::Approx(w.epsilon));
  CHECK(w.distance_to_scaled == doctest::Approx(w.epsilon));
  CHECK_THROWS_AS(nonzero_center_witness(DensityOperator::zero(2)), Error);

  RngStream rng(3);
  const DiameterEstimate est =
      bures_ball_diameter(BallSpec{MetricKind::Bures, diag({0.3, 0.2}), 0.5}, rng, 100);
  CHECK(est.lower_bound > std::numbers::sqrt2 * 0.5);
}

TEST_CASE("zero characterization separates 0 from nonzero centers") {
  RngStream rng(4);
  const std::vector<double> radii{0.5, 1.0, 2.0};
  CHECK(zero_characterization_bures(DensityOperator::zero(3), radii, rng, 50).is_zero);
  const ZeroCharacterization nz = zero_characterization_bures(diag({0.4, 0.1, 0.0}), radii, rng, 50);
  CHECK_FALSE(nz.is_zero);
  CHECK(nz.max_excess > 1e-3);
}

TEST_CASE("midpoint witness") {
  const DensityOperator x = diag({0.3, 0.0});
  const DensityOperator y = diag({0.0, 0.3});
  const DensityOperator z = midpoint_witness_d1(x, y);
  CHECK(trace_distance(x, z) == doctest::Approx(0.3));
  CHECK(trace_distance(y, z) == doctest::Approx(0.3));
  CHECK(trace_norm(z.op()) == doctest::Approx(0.3));
  CHECK_THROWS_AS(midpoint_witness_d1(x, diag({0.1, 0.2})), Error);
}

TEST_CASE("pinch configuration on diag(0.6, 0.4)") {
  RngStream rng(5);
  const DensityOperator a = diag({0.6, 0.4});
  const PinchConfiguration pc = pinch_configuration(a, rng);
  CHECK(pc.epsilon == doctest::Approx(0.3));
  CHECK(trace_distance(pc.x, a) == doctest::Approx(0.3));
  CHECK(trace_distance(pc.y, a) == doctest::Approx(0.3));
  CHECK(trace_distance(pc.x, pc.y) == doctest::Approx(0.6));
  CHECK(std::abs(pc.projection.op()(0, 0) - 1.0) < 1e-12);
}

TEST_CASE("uniqueness search stays near A and respects the balls") {
  RngStream rng(6);
  const DensityOperator a = diag({0.6, 0.4});
  const PinchConfiguration pc = pinch_configuration(a, rng);
  SearchSettings s;
  s.budget = 2000;
  const IntersectionSearchResult r = intersection_uniqueness_search(pc.x, pc.y, a, pc.epsilon, rng, s);
  CHECK(r.proposals == 2000);
  CHECK(r.max_ball_violation <= s.slack);
  CHECK(trace_distance(pc.x, r.best_candidate) <= pc.epsilon + s.slack);
  CHECK(trace_distance(pc.y, r.best_candidate) <= pc.epsilon + s.slack);
  // Feasible points are confined to the slack envelope around A.
  CHECK(r.separation_from_a <= 2.0 * std::sqrt(s.slack * pc.epsilon) + 2.0 * s.slack);
}

TEST_CASE("at A = 0 the intersection is large") {
  RngStream rng(7);
  const DensityOperator x = diag({1.0, 0.0});
  const DensityOperator y = diag({0.0, 1.0});
  SearchSettings s;
  s.budget = 500;
  const IntersectionSearchResult r =
      intersection_uniqueness_search(x, y, DensityOperator::zero(2), 1.0, rng, s);
  CHECK(r.separation_from_a >= 0.5);
}

TEST_CASE("rank through the double orthocomplement") {
  RngStream rng(8);
  for (int n : {1, 2, 4}) {
    for (int rank = 0; rank <= n; ++rank) {
      const DensityOperator a = rank == 0 ? DensityOperator::zero(n) : random_density(n, rank, 1.0, rng);
      const std::vector<DensityOperator> pool = orthocomplement_pool(a, 10, rng);
      CHECK(double_orthocomplement_rank(a, pool) == rank);
    }
  }
  const DensityOperator a = diag({1.0, 0.0});
  CHECK_THROWS_AS(double_orthocomplement_rank(a, std::vector<DensityOperator>{}), Error);
}

TEST_CASE("shifted state space membership") {
  const int n = 3;
  CHECK(khn_membership(HermitianOperator::zero(n), n) == KhnMembership::Interior);
  const std::vector<double> pure{1.0 - 1.0 / n, -1.0 / n, -1.0 / n};
  CHECK(khn_membership(HermitianOperator::diagonal(pure), n) == KhnMembership::Boundary);
  const std::vector<double> outside{1.0, -0.5, -0.5};
  CHECK(khn_membership(HermitianOperator::diagonal(outside), n) == KhnMembership::Outside);
  const std::vector<double> not_traceless{0.5, 0.0, 0.0};
  CHECK_THROWS_AS(khn_membership(HermitianOperator::diagonal(not_traceless), n), Error);
  CHECK(std::string(to_string(KhnMembership::Boundary)) == "boundary");
}

}  // TEST_SUITE
