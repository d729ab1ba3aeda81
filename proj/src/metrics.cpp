#include "qsm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsm {

std::string_view to_string(MetricKind kind) {
  return kind == MetricKind::Bures ? "bures" : "trace";
}

MetricKind metric_from_string(std::string_view name) {
  if (name == "bures") return MetricKind::Bures;
  if (name == "trace" || name == "trace-norm" || name == "d1") return MetricKind::TraceNorm;
  throw Error(ErrorCode::InvalidParameter, "unknown metric '" + std::string(name) + "'");
}

double fidelity(const DensityOperator& a, const DensityOperator& b) {
  require_same_dim(a.op(), b.op());
  const HermitianOperator root_a = matrix_sqrt(a.op());
  const HermitianOperator sandwich(root_a.matrix() * b.matrix() * root_a.matrix());
  const Spectrum s = hermitian_eig(sandwich);
  // Rounding in the two products is of order eps |A| |B|; eigenvalues below
  // that level are zero as far as the data can tell.
  const double scale = std::max(a.trace(), 0.0) * std::max(b.trace(), 0.0);
  const double floor = eigen_noise_floor(s.eigenvalues, scale);
  double f = 0.0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    if (s.eigenvalues(i) > floor) f += std::sqrt(s.eigenvalues(i));
  }
  return f;
}

double bures_distance(const DensityOperator& a, const DensityOperator& b) {
  const double tr_a = a.trace();
  const double tr_b = b.trace();
  const double radicand = tr_a + tr_b - 2.0 * fidelity(a, b);
  if (radicand < -1e-9 * (tr_a + tr_b + 1.0)) {
    throw Error(ErrorCode::NumericalBreakdown,
                "Bures radicand " + std::to_string(radicand) + " is negative", radicand);
  }
  // Below rounding level the radicand is indistinguishable from 0; its square
  // root would otherwise surface as a spurious ~1e-8 distance.
  const double floor = 4.0 * a.dim() * std::numeric_limits<double>::epsilon() * (tr_a + tr_b);
  return radicand <= floor ? 0.0 : std::sqrt(radicand);
}

double trace_distance(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a, b);
  return trace_norm(a - b);
}

double distance(MetricKind kind, const DensityOperator& a, const DensityOperator& b) {
  return kind == MetricKind::Bures ? bures_distance(a, b) : trace_distance(a, b);
}

double product_norm(const DensityOperator& x, const DensityOperator& y) {
  require_same_dim(x.op(), y.op());
  return trace_norm(Matrix(x.matrix() * y.matrix()));
}

bool are_orthogonal(const DensityOperator& x, const DensityOperator& y, double tol) {
  // For PSD operators the trace norm is the trace.
  return product_norm(x, y) <= tol * (1.0 + x.trace() * y.trace());
}

double norm_identity_gap(const DensityOperator& x, const DensityOperator& y) {
  return std::abs(trace_distance(x, y) - trace_norm(x.op() + y.op()));
}

double additivity_gap(const DensityOperator& x, const DensityOperator& y) {
  return trace_norm(x.op()) + trace_norm(y.op()) - trace_distance(x, y);
}

}  // namespace qsm
