#pragma once

#include <complex>
#include <span>
#include <utility>

#include <Eigen/Dense>

#include "qsm/errors.hpp"

namespace qsm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Dense self-adjoint matrix. Construction symmetrizes the input as (M + M*)/2,
/// so entry (i, j) is the exact complex conjugate of entry (j, i) and the
/// diagonal is exactly real. Non-finite entries are rejected.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& m);

  static HermitianOperator zero(int n);
  static HermitianOperator identity(int n);
  static HermitianOperator diagonal(std::span<const double> values);
  /// v v* for an arbitrary (not necessarily normalized) vector.
  static HermitianOperator outer(const Vector& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  HermitianOperator& operator+=(const HermitianOperator& other);
  HermitianOperator& operator-=(const HermitianOperator& other);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) { return a += b; }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) { return a -= b; }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }
  friend HermitianOperator operator-(HermitianOperator a) { return a *= -1.0; }

  bool operator==(const HermitianOperator& other) const { return m_ == other.m_; }

 private:
  Matrix m_;
};

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored column-wise.
struct Spectrum {
  RealVector eigenvalues;
  Matrix eigenvectors;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  /// V diag(f(lambda)) V*.
  template <class F>
  HermitianOperator map(F&& f) const {
    RealVector mapped(eigenvalues.size());
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) mapped(i) = f(eigenvalues(i));
    return HermitianOperator(eigenvectors * mapped.asDiagonal() * eigenvectors.adjoint());
  }
  HermitianOperator reconstruct() const {
    return map([](double x) { return x; });
  }
};

Spectrum hermitian_eig(const HermitianOperator& a);

/// Numerically-PSD threshold used when none is supplied: 1e-9 (1 + |A|_1).
double psd_tolerance(const Spectrum& s);

/// Eigenvalues at or below this level are indistinguishable from zero after
/// an eigensolve of a matrix whose entries are of size `scale`.
double eigen_noise_floor(const RealVector& eigenvalues, double scale);

/// Principal square root. Eigenvalues in [-tol, 0) are clamped to zero;
/// anything below -tol raises NotPositiveSemidefinite. Eigenvalues under the
/// rounding noise floor map to zero rather than to their (meaningless) root.
HermitianOperator matrix_sqrt(const HermitianOperator& a, double tol);
HermitianOperator matrix_sqrt(const HermitianOperator& a);

HermitianOperator abs_op(const HermitianOperator& t);

struct PosNegParts {
  HermitianOperator positive;
  HermitianOperator negative;
};

/// T+ = (|T| + T)/2 and T- = (|T| - T)/2.
PosNegParts pos_neg_parts(const HermitianOperator& t);

double trace(const HermitianOperator& a);

/// Sum of absolute eigenvalues.
double trace_norm(const HermitianOperator& a);
/// Sum of singular values of an arbitrary square matrix.
double trace_norm(const Matrix& m);

/// Entrywise complex conjugation in the computational basis (equal to the
/// transpose for self-adjoint input).
HermitianOperator conjugate(const HermitianOperator& a);

/// U A U*.
HermitianOperator conjugate_by(const Matrix& u, const HermitianOperator& a);

void require_same_dim(const HermitianOperator& a, const HermitianOperator& b);

}  // namespace qsm
