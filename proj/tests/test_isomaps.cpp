#include <doctest.h>

#include <cmath>
#include <vector>

#include "qsm/isomaps.hpp"

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

TEST_SUITE("isomaps") {

TEST_CASE("conjugations are isometries for both metrics") {
  RngStream rng(1);
  for (ImplementerKind kind : {ImplementerKind::Unitary, ImplementerKind::Antiunitary}) {
    for (MapDomain domain : {MapDomain::FullDensity, MapDomain::StatesOnly}) {
      const StateMap m = StateMap::conjugation(kind, random_unitary(4, rng), domain);
      for (MetricKind metric : {MetricKind::Bures, MetricKind::TraceNorm}) {
        const IsometryReport r = check_isometry(m, metric, RngStream(2), 200);
        CHECK(r.pairs_tested == 200);
        CHECK(r.max_deviation <= 1e-8);
      }
    }
  }
}

TEST_CASE("isometry check is independent of scheduling") {
  RngStream rng(3);
  const Matrix u = random_unitary(3, rng).matrix();
  const OracleFn fn = [u](const HermitianOperator& a) { return conjugate_by(u, a); };
  const StateMap shared = StateMap::oracle(3, fn, MapDomain::FullDensity, "shared", true);
  const StateMap serial = StateMap::oracle(3, fn, MapDomain::FullDensity, "serial", false);
  const IsometryReport fast = check_isometry(shared, MetricKind::Bures, RngStream(4), 64);
  const IsometryReport slow = check_isometry(serial, MetricKind::Bures, RngStream(4), 64);
  CHECK(fast.max_deviation == slow.max_deviation);
  CHECK_FALSE(slow.ran_concurrently);
}

TEST_CASE("transpose is the antiunitary map with implementer I") {
  const Complex i(0.0, 1.0);
  Matrix m(2, 2);
  m << 0.5, 0.2 * i, -0.2 * i, 0.5;
  const DensityOperator a{HermitianOperator(m)};
  const DensityOperator t = StateMap::transpose(2)(a);
  CHECK(std::abs(t.op()(0, 1) + 0.2 * i) < 1e-15);
}

TEST_CASE("named maps") {
  const std::vector<double> d{1.0, 0.0};
  const DensityOperator e1(HermitianOperator::diagonal(d));
  const DensityOperator dep = named_nonisometry(NamedMap::Depolarizing, 2, 0.5)(e1);
  CHECK(dep.op()(0, 0).real() == doctest::Approx(0.75));
  CHECK(dep.op()(1, 1).real() == doctest::Approx(0.25));

  Matrix m = Matrix::Constant(2, 2, 0.5);
  const DensityOperator plus{HermitianOperator(m)};
  const DensityOperator pinched = named_nonisometry(NamedMap::Pinching, 2)(plus);
  CHECK(std::abs(pinched.op()(0, 1)) < 1e-15);

  CHECK(named_nonisometry(NamedMap::TraceRescale, 2, 2.0)(e1).trace() == doctest::Approx(2.0));
  CHECK(code_of([] { named_nonisometry(NamedMap::Depolarizing, 2, 1.5); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([] { named_nonisometry(NamedMap::TraceRescale, 2, 0.0); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("domain violations") {
  const StateMap states = StateMap::identity(2, MapDomain::StatesOnly);
  CHECK(code_of([&] { states(DensityOperator::zero(2)); }) == ErrorCode::DomainError);
  CHECK(code_of([&] { states(DensityOperator::zero(3)); }) == ErrorCode::DimensionMismatch);
  CHECK(code_of([&] { zero_image_distance(states, MetricKind::Bures); }) == ErrorCode::DomainError);
  const StateMap rescale = named_nonisometry(NamedMap::TraceRescale, 2, 2.0).with_domain(MapDomain::StatesOnly);
  const std::vector<double> d{0.5, 0.5};
  CHECK(code_of([&] { rescale(DensityOperator(HermitianOperator::diagonal(d))); }) == ErrorCode::DomainError);
}

TEST_CASE("preservation suite passes for conjugations and fails for controls") {
  RngStream rng(5);
  const StateMap u = StateMap::conjugation(ImplementerKind::Antiunitary, random_unitary(3, rng));
  CHECK(preservation_suite(u, RngStream(6), 40).all_pass());

  const PreservationReport dep = preservation_suite(named_nonisometry(NamedMap::Depolarizing, 3, 0.5), RngStream(6), 40);
  CHECK_FALSE(dep.find("rank")->pass);
  CHECK_FALSE(dep.find("orthogonality_forward")->pass);
  CHECK(dep.find("zero_fixed")->pass);

  const PreservationReport pin = preservation_suite(named_nonisometry(NamedMap::Pinching, 3), RngStream(6), 40);
  CHECK_FALSE(pin.find("rank")->pass);

  const PreservationReport resc = preservation_suite(named_nonisometry(NamedMap::TraceRescale, 3, 2.0), RngStream(6), 40);
  CHECK_FALSE(resc.find("trace")->pass);
  CHECK(resc.find("rank")->pass);
  CHECK(resc.find("zero_fixed")->pass);
  CHECK(dep.find("nonexistent") == nullptr);
}

TEST_CASE("reconstruction of builtin maps") {
  const ReconstructionResult id = reconstruct_implementer(StateMap::identity(3).as_oracle(), RngStream(1));
  CHECK(id.kind == ImplementerKind::Unitary);
  CHECK(id.residual <= 1e-10);
  CHECK(phase_invariant_overlap(id.u, Unitary::identity(3)) == doctest::Approx(1.0).epsilon(1e-12));

  const ReconstructionResult t = reconstruct_implementer(StateMap::transpose(3).as_oracle(), RngStream(1));
  CHECK(t.kind == ImplementerKind::Antiunitary);
  CHECK(phase_invariant_overlap(t.u, Unitary::identity(3)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reconstruction recovers a hidden conjugation") {
  RngStream rng(7);
  for (ImplementerKind kind : {ImplementerKind::Unitary, ImplementerKind::Antiunitary}) {
    const Unitary truth = random_unitary(5, rng);
    const StateMap hidden = StateMap::conjugation(kind, truth, MapDomain::StatesOnly).as_oracle();
    const ReconstructionResult r = reconstruct_implementer(hidden, RngStream(8));
    CHECK(r.kind == kind);
    CHECK(r.residual <= 1e-6);
    CHECK(phase_invariant_overlap(r.u, truth) >= 1.0 - 1e-8);
  }
}

TEST_CASE("reconstruction rejects non-isometries") {
  const auto rejected = [](const StateMap& m) {
    const ErrorCode c = code_of([&] { reconstruct_implementer(m.as_oracle(), RngStream(1)); });
    return c == ErrorCode::NotIsometryEvidence || c == ErrorCode::NotImplementable;
  };
  CHECK(rejected(named_nonisometry(NamedMap::Depolarizing, 2, 0.5)));
  CHECK(rejected(named_nonisometry(NamedMap::Pinching, 3)));
  CHECK(rejected(named_nonisometry(NamedMap::TraceRescale, 2, 2.0)));

  // Pure-to-pure but not a conjugation: fails validation on mixed states.
  const StateMap odd = StateMap::oracle(
      2,
      [](const HermitianOperator& a) {
        const HermitianOperator sq = hermitian_eig(a).map([](double x) { return x * x; });
        return sq * (1.0 / trace(sq));
      },
      MapDomain::StatesOnly, "squash");
  CHECK(code_of([&] { reconstruct_implementer(odd, RngStream(2)); }) == ErrorCode::NotImplementable);
}

TEST_CASE("round trip in dimension one and beyond") {
  RoundtripSettings s;
  s.isometry_pairs = 100;
  s.preservation_samples = 20;
  s.fresh_states = 20;
  for (int n : {1, 2, 6}) {
    for (MapDomain d : {MapDomain::FullDensity, MapDomain::StatesOnly}) {
      const RoundtripReport r = theorem_roundtrip(ImplementerKind::Antiunitary, n, d, RngStream(9, n), s);
      CHECK(r.pass);
      CHECK(r.reconstruction.has_value());
    }
  }
}

}  // TEST_SUITE
