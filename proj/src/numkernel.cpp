#include "qsm/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace qsm {

namespace {

Matrix symmetrized(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      out(i, j) = (m(i, j) + std::conj(m(j, i))) * 0.5;
    }
  }
  return out;
}

}  // namespace

HermitianOperator::HermitianOperator(const Matrix& m) {
  if (m.rows() < 1 || m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "operator must be square with dim >= 1, got " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()));
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::NonFinite, "operator has NaN or infinite entries");
  }
  m_ = symmetrized(m);
}

HermitianOperator HermitianOperator::zero(int n) { return HermitianOperator(Matrix::Zero(n, n)); }

HermitianOperator HermitianOperator::identity(int n) {
  return HermitianOperator(Matrix::Identity(n, n));
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()),
                          static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return HermitianOperator(m);
}

HermitianOperator HermitianOperator::outer(const Vector& v) {
  return HermitianOperator(v * v.adjoint());
}

// Sums, differences and real multiples of exactly-Hermitian storage stay
// exactly Hermitian, so these skip re-symmetrization.
HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
  require_same_dim(*this, other);
  m_ += other.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& other) {
  require_same_dim(*this, other);
  m_ -= other.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  if (!std::isfinite(s)) throw Error(ErrorCode::NonFinite, "non-finite scale factor");
  m_ *= s;
  return *this;
}

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimensions differ: " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
}

Spectrum hermitian_eig(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    // Residual of whatever the solver left behind, for diagnostics.
    double residual = std::numeric_limits<double>::infinity();
    if (solver.eigenvectors().allFinite() && solver.eigenvalues().allFinite()) {
      residual = (solver.eigenvectors() * solver.eigenvalues().asDiagonal() *
                      solver.eigenvectors().adjoint() -
                  a.matrix())
                     .norm();
    }
    throw Error(ErrorCode::EigenFailure, "Hermitian eigensolver did not converge", residual);
  }
  return Spectrum{solver.eigenvalues(), solver.eigenvectors()};
}

double psd_tolerance(const Spectrum& s) {
  return 1e-9 * (1.0 + s.eigenvalues.cwiseAbs().sum());
}

double eigen_noise_floor(const RealVector& eigenvalues, double scale) {
  return 8.0 * static_cast<double>(eigenvalues.size()) * std::numeric_limits<double>::epsilon() *
         scale;
}

namespace {

HermitianOperator sqrt_of_spectrum(const Spectrum& s, double tol) {
  const double lowest = s.eigenvalues(0);
  if (lowest < -tol) {
    throw Error(ErrorCode::NotPositiveSemidefinite,
                "eigenvalue " + std::to_string(lowest) + " below -" + std::to_string(tol), lowest);
  }
  const double floor =
      eigen_noise_floor(s.eigenvalues, std::max(s.eigenvalues.maxCoeff(), 0.0));
  return s.map([floor](double x) { return x > floor ? std::sqrt(x) : 0.0; });
}

}  // namespace

HermitianOperator matrix_sqrt(const HermitianOperator& a, double tol) {
  return sqrt_of_spectrum(hermitian_eig(a), tol);
}

HermitianOperator matrix_sqrt(const HermitianOperator& a) {
  const Spectrum s = hermitian_eig(a);
  return sqrt_of_spectrum(s, psd_tolerance(s));
}

HermitianOperator abs_op(const HermitianOperator& t) {
  return hermitian_eig(t).map([](double x) { return std::abs(x); });
}

PosNegParts pos_neg_parts(const HermitianOperator& t) {
  const HermitianOperator abs_t = abs_op(t);
  return PosNegParts{0.5 * (abs_t + t), 0.5 * (abs_t - t)};
}

double trace(const HermitianOperator& a) { return a.matrix().diagonal().real().sum(); }

double trace_norm(const HermitianOperator& a) {
  return hermitian_eig(a).eigenvalues.cwiseAbs().sum();
}

double trace_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

HermitianOperator conjugate(const HermitianOperator& a) {
  return HermitianOperator(a.matrix().conjugate());
}

HermitianOperator conjugate_by(const Matrix& u, const HermitianOperator& a) {
  if (u.rows() != a.dim() || u.cols() != a.dim()) {
    throw Error(ErrorCode::DimensionMismatch, "conjugating matrix does not match operator dim");
  }
  return HermitianOperator(u * a.matrix() * u.adjoint());
}

}  // namespace qsm
