#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qsm/metrics.hpp"

namespace qsm {

/// Closed ball in the density cone for one of the two metrics.
struct BallSpec {
  MetricKind metric;
  DensityOperator center;
  double radius;
};

bool in_ball(const BallSpec& ball, const DensityOperator& x, double slack = 1e-9);

struct DiameterEstimate {
  /// Best witnessed pair distance; a lower bound on the diameter.
  double lower_bound = 0.0;
  DensityOperator witness_x;
  DensityOperator witness_y;
  int samples_used = 0;
  /// Largest distance among the randomly sampled pairs alone.
  double max_sampled_distance = 0.0;
  /// True when the best pair is an analytic witness rather than a sample.
  bool analytic_witness = false;
};

/// Estimates diam of a Bures ball from below. For center 0 the samples are
/// exact ball members (trace rescaled into [0, r^2]) and, for dim >= 2, the
/// pair (r^2 P, r^2 Q) with orthogonal rank-one P, Q is included. For a
/// nonzero center the witness pair is taken along the ray through the center.
DiameterEstimate bures_ball_diameter(const BallSpec& ball, RngStream& rng, int samples);

/// The pair (0, 4A) inside the Bures ball of radius sqrt(tr A) about A.
struct CenterWitness {
  double epsilon = 0.0;
  DensityOperator zero;
  DensityOperator scaled;
  double distance_to_zero = 0.0;    // d_b(A, 0)
  double distance_to_scaled = 0.0;  // d_b(A, 4A)
  double pair_distance = 0.0;       // d_b(0, 4A)
  /// Both points in the ball and the pair at distance 2 eps, each within 1e-9.
  bool certified = false;
};

CenterWitness nonzero_center_witness(const DensityOperator& a);

struct ZeroCharacterization {
  bool is_zero = true;
  /// Largest (witnessed diameter - sqrt(2) eps) across the radii.
  double max_excess = 0.0;
  double worst_radius = 0.0;
  std::vector<double> radii_tested;
};

/// A is reported zero iff no tested radius exhibits a pair farther apart than
/// sqrt(2) eps + 1e-9. For A != 0, eps = sqrt(tr A) is added to the grid when
/// it lies within [min radius, max radius].
ZeroCharacterization zero_characterization_bures(const DensityOperator& a,
                                                 std::span<const double> radii, RngStream& rng,
                                                 int samples);

/// Z = (X + Y)/2 for X, Y of trace norm eps at d_1 distance 2 eps.
DensityOperator midpoint_witness_d1(const DensityOperator& x, const DensityOperator& y);

struct PinchConfiguration {
  double epsilon = 0.0;
  QuantumState projection;  // P
  DensityOperator center;   // A
  DensityOperator x;        // A + eps P
  DensityOperator y;        // A - eps P
};

/// P projects onto an eigenvector for the largest eigenvalue lambda of A and
/// eps = lambda / 2. A degenerate top eigenvalue draws the vector at random
/// from its eigenspace.
PinchConfiguration pinch_configuration(const DensityOperator& a, RngStream& rng);

struct SearchSettings {
  int budget = 10000;
  double slack = 1e-7;
  double initial_scale_factor = 0.1;  // times eps
  double cooling = 0.9;
  int rejections_per_cooling = 100;
};

struct IntersectionSearchResult {
  DensityOperator best_candidate;
  /// d_1(best, A).
  double separation_from_a = 0.0;
  /// max over accepted points of max(d_1(X, Z), d_1(Y, Z)) - eps.
  double max_ball_violation = 0.0;
  /// max over accepted points of ||(X - Z) - (X - Y)/2||_1.
  double max_extreme_point_deviation = 0.0;
  int proposals = 0;
  int accepted = 0;
  double final_scale = 0.0;
};

/// Randomized local search for a Z != A in the intersection of the two d_1
/// balls of radius eps about X and Y. Proposals add Gaussian Hermitian steps
/// (trace-norm length = current scale) to the current point and project onto
/// the PSD cone; proposals outside either ball (beyond `slack`) are rejected,
/// feasible ones are accepted by a Metropolis rule on the separation from A.
/// The scale cools geometrically after every block of rejections. The
/// midpoint (X + Y)/2 seeds the search.
IntersectionSearchResult intersection_uniqueness_search(const DensityOperator& x,
                                                        const DensityOperator& y,
                                                        const DensityOperator& a, double epsilon,
                                                        RngStream& rng,
                                                        const SearchSettings& settings = {});

/// Size of a greedily extracted maximal pairwise-orthogonal family of nonzero
/// elements of {A}^perp-perp, where both orthocomplements are taken within
/// `pool`.
int double_orthocomplement_rank(const DensityOperator& a, std::span<const DensityOperator> pool,
                                double tol = kDefaultOrthogonalityTol);

/// Eigenprojections of A followed by `extra` random densities of random rank
/// and trace.
std::vector<DensityOperator> orthocomplement_pool(const DensityOperator& a, int extra,
                                                  RngStream& rng);

enum class KhnMembership { Interior, Boundary, Outside };

const char* to_string(KhnMembership m);

/// Classifies a trace-zero self-adjoint T against S(H) - I/n, whose members
/// have all eigenvalues in [-1/n, 1 - 1/n].
KhnMembership khn_membership(const HermitianOperator& t, int n);

}  // namespace qsm
