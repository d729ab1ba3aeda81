#include <doctest.h>

#include <cmath>
#include <set>
#include <vector>

#include "qsm/states.hpp"

using namespace qsm;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_SUITE("states") {

TEST_CASE("random streams are reproducible and independent") {
  RngStream a(42, 3), b(42, 3), c(42, 4);
  std::vector<std::uint64_t> xa, xb, xc;
  for (int i = 0; i < 8; ++i) {
    xa.push_back(a.next_u64());
    xb.push_back(b.next_u64());
    xc.push_back(c.next_u64());
  }
  CHECK(xa == xb);
  CHECK(xa != xc);
  RngStream s0 = a.substream(0), s1 = a.substream(1), s0b = b.substream(0);
  CHECK(s0.next_u64() == s0b.next_u64());
  CHECK(s0.next_u64() != s1.next_u64());
}

TEST_CASE("uniform, below and normal draws are in range") {
  RngStream r(7);
  double sum = 0.0, sq = 0.0;
  const int count = 20000;
  for (int i = 0; i < count; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(5) < 5u);
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / count) < 0.05);
  CHECK(std::abs(sq / count - 1.0) < 0.05);
  CHECK_THROWS_AS(r.below(0), Error);
}

TEST_CASE("Haar unitaries are unitary") {
  RngStream r(1);
  for (int n : {1, 2, 5, 8}) {
    const Unitary u = random_unitary(n, r);
    CHECK(u.unitarity_defect() < 1e-12 * n);
  }
  CHECK(code_of([] { Unitary(Matrix::Constant(2, 2, 1.0)); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("nearest unitary recovers a perturbed unitary") {
  RngStream r(2);
  const Unitary u = random_unitary(4, r);
  const Matrix noisy = u.matrix() + 1e-7 * Matrix::Random(4, 4);
  const Unitary w = Unitary::nearest(noisy);
  CHECK(w.unitarity_defect() < 1e-12);
  CHECK((w.matrix() - u.matrix()).norm() < 1e-6);
}

TEST_CASE("density operators") {
  const std::vector<double> d{0.3, 0.7};
  const DensityOperator a(HermitianOperator::diagonal(d));
  CHECK(a.trace() == doctest::Approx(1.0));

  const std::vector<double> neg{0.5, -0.1};
  CHECK(code_of([&] { DensityOperator{HermitianOperator::diagonal(neg)}; }) ==
        ErrorCode::NotPositiveSemidefinite);
  const DensityOperator projected = DensityOperator::project(HermitianOperator::diagonal(neg));
  CHECK(projected.trace() == doctest::Approx(0.5));

  CHECK(code_of([&] { (void)(-1.0 * a); }) == ErrorCode::InvalidParameter);
  CHECK((2.0 * a).trace() == doctest::Approx(2.0));
  CHECK((a + a).trace() == doctest::Approx(2.0));
  CHECK(DensityOperator::zero(3).trace() == 0.0);
}

TEST_CASE("quantum states require unit trace") {
  const std::vector<double> d{0.3, 0.3};
  CHECK(code_of([&] { QuantumState{HermitianOperator::diagonal(d)}; }) == ErrorCode::DomainError);
}

TEST_CASE("pure states") {
  Vector v(2);
  v << 1.0, Complex(0.0, 1.0);
  const QuantumState p = PureState(v).as_projection();
  CHECK(std::abs(p.op()(0, 0) - 0.5) < 1e-15);
  CHECK(std::abs(p.op()(0, 1) - Complex(0.0, -0.5)) < 1e-15);
  CHECK(std::abs(p.op()(1, 0) - Complex(0.0, 0.5)) < 1e-15);
  CHECK(std::abs(p.op()(1, 1) - 0.5) < 1e-15);
  CHECK(code_of([] { PureState(Vector::Zero(3)); }) == ErrorCode::InvalidVector);
}

TEST_CASE("random densities have the requested rank and trace") {
  RngStream r(4);
  for (int n : {1, 3, 6}) {
    for (int rank = 1; rank <= n; ++rank) {
      const DensityOperator a = random_density(n, rank, 2.5, r);
      CHECK(a.trace() == doctest::Approx(2.5).epsilon(1e-12));
      CHECK(rank_of(a) == rank);
    }
  }
  CHECK(code_of([&] { random_density(3, 4, 1.0, r); }) == ErrorCode::InvalidRank);
  CHECK(code_of([&] { random_density(3, 0, 1.0, r); }) == ErrorCode::InvalidRank);
  CHECK(rank_of(DensityOperator::zero(4)) == 0);
}

TEST_CASE("orthogonal pairs") {
  RngStream r(8);
  for (int n : {2, 3, 6}) {
    const auto [x, y] = random_orthogonal_pair(n, 0.4, 1.3, r);
    CHECK(x.trace() == doctest::Approx(0.4));
    CHECK(y.trace() == doctest::Approx(1.3));
    CHECK(trace_norm(Matrix(x.matrix() * y.matrix())) < 1e-12);
  }
  CHECK_THROWS_AS(random_orthogonal_pair(1, 1.0, 1.0, r), Error);
}

}  // TEST_SUITE
