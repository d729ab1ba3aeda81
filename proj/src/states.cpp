#include "qsm/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qsm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index), engine_(seeded_engine(seed, stream_index)) {}

RngStream RngStream::substream(std::uint64_t k) const {
  return RngStream(seed_, splitmix64(splitmix64(stream_index_) ^ (k + 1)));
}

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidParameter, "below(0) has an empty range");
  if (n == 1) return 0;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

double RngStream::normal() {
  if (spare_) {
    const double out = *spare_;
    spare_.reset();
    return out;
  }
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  return r * std::cos(theta);
}

Complex RngStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * std::numbers::sqrt2 * 0.5;
}

double unitarity_defect(const Matrix& u) {
  const Matrix gram = u * u.adjoint() - Matrix::Identity(u.rows(), u.cols());
  return trace_norm(HermitianOperator(gram));
}

Unitary::Unitary(const Matrix& u) : u_(u) {
  if (u.rows() < 1 || u.rows() != u.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "unitary must be square with dim >= 1");
  }
  if (!u.allFinite()) throw Error(ErrorCode::NonFinite, "unitary has non-finite entries");
  const double defect = qsm::unitarity_defect(u);
  if (defect > 1e-10 * static_cast<double>(u.rows())) {
    throw Error(ErrorCode::InvalidParameter,
                "matrix is not unitary, ||UU* - I||_1 = " + std::to_string(defect), defect);
  }
}

Unitary Unitary::identity(int n) { return Unitary(Matrix::Identity(n, n)); }

Unitary Unitary::nearest(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return Unitary(svd.matrixU() * svd.matrixV().adjoint());
}

double Unitary::unitarity_defect() const { return qsm::unitarity_defect(u_); }

DensityOperator::DensityOperator(const HermitianOperator& op) : op_(op) {
  const Spectrum s = hermitian_eig(op);
  const double tr = qsm::trace(op);
  const double lowest = s.eigenvalues(0);
  if (lowest < -1e-9 * (1.0 + std::abs(tr))) {
    throw Error(ErrorCode::NotPositiveSemidefinite,
                "eigenvalue " + std::to_string(lowest) + " is not numerically nonnegative", lowest);
  }
  if (lowest < 0.0) op_ = s.map([](double x) { return std::max(x, 0.0); });
}

DensityOperator DensityOperator::zero(int n) {
  return DensityOperator(HermitianOperator::zero(n), Trusted{});
}

DensityOperator DensityOperator::project(const HermitianOperator& op) {
  const Spectrum s = hermitian_eig(op);
  if (s.eigenvalues(0) >= 0.0) return DensityOperator(op, Trusted{});
  return DensityOperator(s.map([](double x) { return std::max(x, 0.0); }), Trusted{});
}

DensityOperator operator+(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(a.op_ + b.op_, DensityOperator::Trusted{});
}

DensityOperator operator*(double s, const DensityOperator& a) {
  if (!(s >= 0.0)) {
    throw Error(ErrorCode::InvalidParameter, "density operators scale by nonnegative factors", s);
  }
  return DensityOperator(s * a.op_, DensityOperator::Trusted{});
}

QuantumState::QuantumState(DensityOperator d) : d_(std::move(d)) {
  const double tr = d_.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw Error(ErrorCode::DomainError, "state must have unit trace, got " + std::to_string(tr), tr);
  }
}

PureState::PureState(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorCode::InvalidVector, "pure state needs a nonzero finite vector");
  }
  v_ = v / norm;
}

QuantumState PureState::as_projection() const {
  return QuantumState(HermitianOperator::outer(v_));
}

Unitary random_unitary(int n, RngStream& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "dimension must be >= 1");
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  // Fix the phases so R has a positive real diagonal; this makes the
  // distribution exactly Haar.
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0.0 ? d / mag : Complex(1.0, 0.0);
  }
  return Unitary(q);
}

DensityOperator random_density(int n, int rank, double trace_target, RngStream& rng) {
  if (n < 1) throw Error(ErrorCode::InvalidParameter, "dimension must be >= 1");
  if (rank < 1 || rank > n) {
    throw Error(ErrorCode::InvalidRank,
                "rank " + std::to_string(rank) + " outside [1, " + std::to_string(n) + "]", rank);
  }
  if (!(trace_target > 0.0) || !std::isfinite(trace_target)) {
    throw Error(ErrorCode::InvalidParameter, "trace target must be positive", trace_target);
  }
  Matrix g(n, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  HermitianOperator w(g * g.adjoint());
  w *= trace_target / trace(w);
  return DensityOperator::project(w);
}

QuantumState random_state(int n, int rank, RngStream& rng) {
  DensityOperator d = random_density(n, rank, 1.0, rng);
  // Renormalize after the projection so the trace is 1 to rounding.
  return QuantumState((1.0 / d.trace()) * d);
}

PureState random_pure_state(int n, RngStream& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return PureState(v);
}

HermitianOperator random_hermitian(int n, RngStream& rng) {
  Matrix g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  return HermitianOperator(g);
}

std::pair<DensityOperator, DensityOperator> random_orthogonal_pair(int n, double trace_x,
                                                                   double trace_y,
                                                                   RngStream& rng) {
  if (n < 2) throw Error(ErrorCode::InvalidParameter, "orthogonal nonzero pairs need dim >= 2");
  const Unitary basis = random_unitary(n, rng);
  const int split = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
  auto build = [&](int first, int last, double target) {
    RealVector weights = RealVector::Zero(n);
    for (int k = first; k < last; ++k) weights(k) = 0.1 + rng.uniform();
    weights *= target / weights.sum();
    return DensityOperator::project(
        HermitianOperator(basis.matrix() * weights.asDiagonal() * basis.matrix().adjoint()));
  };
  DensityOperator x = build(0, split, trace_x);
  DensityOperator y = build(split, n, trace_y);
  return {std::move(x), std::move(y)};
}

int rank_of(const DensityOperator& a, double tol) {
  const Spectrum s = hermitian_eig(a.op());
  const double threshold = tol * (1.0 + a.trace());
  int count = 0;
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) count += s.eigenvalues(i) > threshold;
  return count;
}

}  // namespace qsm
