#pragma once

#include <string_view>

#include "qsm/states.hpp"

namespace qsm {

enum class MetricKind { Bures, TraceNorm };

std::string_view to_string(MetricKind kind);
MetricKind metric_from_string(std::string_view name);

/// F(A, B) = tr (A^{1/2} B A^{1/2})^{1/2}.
double fidelity(const DensityOperator& a, const DensityOperator& b);

/// d_b(A, B) = (tr A + tr B - 2 F(A, B))^{1/2}. A radicand at rounding level
/// gives 0; one below -1e-9 (tr A + tr B + 1) raises NumericalBreakdown.
double bures_distance(const DensityOperator& a, const DensityOperator& b);

/// d_1(A, B) = ||A - B||_1.
double trace_distance(const HermitianOperator& a, const HermitianOperator& b);

double distance(MetricKind kind, const DensityOperator& a, const DensityOperator& b);

inline constexpr double kDefaultOrthogonalityTol = 1e-8;

/// ||X Y||_1 <= tol (1 + ||X||_1 ||Y||_1).
bool are_orthogonal(const DensityOperator& x, const DensityOperator& y,
                    double tol = kDefaultOrthogonalityTol);

/// ||X Y||_1, the operator side of the orthogonality equivalence.
double product_norm(const DensityOperator& x, const DensityOperator& y);

/// | ||X - Y||_1 - ||X + Y||_1 |, the metric side of the equivalence.
double norm_identity_gap(const DensityOperator& x, const DensityOperator& y);

/// d_1(X, 0) + d_1(Y, 0) - d_1(X, Y); zero exactly for orthogonal pairs.
double additivity_gap(const DensityOperator& x, const DensityOperator& y);

}  // namespace qsm
