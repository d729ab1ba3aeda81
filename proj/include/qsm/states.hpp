#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>

#include "qsm/numkernel.hpp"

namespace qsm {

/// Deterministic random stream identified by (seed, stream_index). Draws are
/// produced from std::mt19937_64 and converted to doubles/normals by hand so
/// the sequence does not depend on the standard library's distributions.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_index = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_index_; }

  /// Independent child stream; children with different k never share state.
  RngStream substream(std::uint64_t k) const;

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform integer in [0, n); n = 0 raises InvalidParameter.
  std::uint64_t below(std::uint64_t n);
  double normal();
  /// Standard complex normal: real and imaginary parts each N(0, 1/2).
  Complex complex_normal();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// Square matrix with U U* = I to within 1e-10 n in trace norm.
class Unitary {
 public:
  explicit Unitary(const Matrix& u);

  static Unitary identity(int n);
  /// Unitary polar factor W of M = W |M| (the closest unitary in any unitarily
  /// invariant norm).
  static Unitary nearest(const Matrix& m);

  int dim() const { return static_cast<int>(u_.rows()); }
  const Matrix& matrix() const { return u_; }
  /// ||U U* - I||_1.
  double unitarity_defect() const;

 private:
  Matrix u_;
};

double unitarity_defect(const Matrix& u);

/// Positive semidefinite operator (an element of the density cone, trace not
/// normalized).
class DensityOperator {
 public:
  /// Accepts eigenvalues down to -1e-9 (1 + tr) and clamps them to zero;
  /// anything lower raises NotPositiveSemidefinite.
  explicit DensityOperator(const HermitianOperator& op);

  static DensityOperator zero(int n);
  /// Projection onto the PSD cone: every negative eigenvalue is set to zero.
  static DensityOperator project(const HermitianOperator& op);

  const HermitianOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }
  int dim() const { return op_.dim(); }
  double trace() const { return qsm::trace(op_); }

  operator const HermitianOperator&() const { return op_; }

  friend DensityOperator operator+(const DensityOperator& a, const DensityOperator& b);
  /// Scaling by s >= 0; negative s raises InvalidParameter.
  friend DensityOperator operator*(double s, const DensityOperator& a);

 private:
  struct Trusted {};
  DensityOperator(HermitianOperator op, Trusted) : op_(std::move(op)) {}

  HermitianOperator op_;
};

/// Density operator with unit trace (|tr - 1| <= 1e-10).
class QuantumState {
 public:
  explicit QuantumState(DensityOperator d);
  explicit QuantumState(const HermitianOperator& op) : QuantumState(DensityOperator(op)) {}

  const DensityOperator& density() const { return d_; }
  const HermitianOperator& op() const { return d_.op(); }
  int dim() const { return d_.dim(); }

  operator const DensityOperator&() const { return d_; }
  operator const HermitianOperator&() const { return d_.op(); }

 private:
  DensityOperator d_;
};

class PureState {
 public:
  /// Normalizes v; a zero (or non-finite) vector raises InvalidVector.
  explicit PureState(const Vector& v);

  const Vector& vector() const { return v_; }
  int dim() const { return static_cast<int>(v_.size()); }
  /// The rank-one projection v v*.
  QuantumState as_projection() const;

 private:
  Vector v_;
};

Unitary random_unitary(int n, RngStream& rng);

/// G G* rescaled to the target trace, G an n x rank complex Gaussian matrix.
DensityOperator random_density(int n, int rank, double trace_target, RngStream& rng);
QuantumState random_state(int n, int rank, RngStream& rng);
PureState random_pure_state(int n, RngStream& rng);
/// Gaussian unitary ensemble sample (entries of unit scale).
HermitianOperator random_hermitian(int n, RngStream& rng);

/// Two densities with orthogonal supports: the columns of a Haar basis are
/// split into disjoint nonempty groups and each group carries random weights.
/// Requires n >= 2.
std::pair<DensityOperator, DensityOperator> random_orthogonal_pair(int n, double trace_x,
                                                                   double trace_y,
                                                                   RngStream& rng);

/// Count of eigenvalues strictly above tol (1 + tr A).
int rank_of(const DensityOperator& a, double tol = 1e-10);

}  // namespace qsm
