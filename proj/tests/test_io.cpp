#include <doctest.h>

#include <string>

#include "qsm/io.hpp"
#include "qsm/suites.hpp"

using namespace qsm;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an exception");
  return ErrorCode::InvalidParameter;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("matrices round-trip through JSON exactly") {
  RngStream rng(1);
  const HermitianOperator a = random_hermitian(3, rng);
  const json j = to_json(a);
  CHECK(j["dim"] == 3);
  const HermitianOperator back = hermitian_from_json(json::parse(j.dump()));
  CHECK(back == a);
}

TEST_CASE("malformed matrices are parse errors") {
  CHECK(code_of([] { matrix_from_json(json::parse(R"({"dim": 2, "entries": [[[1, 0]]]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] { matrix_from_json(json::parse(R"({"entries": []})")); }) == ErrorCode::ParseError);
  CHECK(code_of([] { matrix_from_json(json::parse(R"({"dim": 1, "entries": [[["a", 0]]]})")); }) ==
        ErrorCode::ParseError);
  CHECK(code_of([] {
          hermitian_from_json(json::parse(R"({"dim": 2, "entries": [[[1,0],[1,0]],[[0,0],[1,0]]]})"));
        }) == ErrorCode::ParseError);
  CHECK(code_of([] { load_json_file("/nonexistent/file.json"); }) == ErrorCode::ParseError);
}

TEST_CASE("pure states and maps round-trip") {
  RngStream rng(2);
  const PureState v = random_pure_state(3, rng);
  CHECK((pure_state_from_json(to_json(v)).vector() - v.vector()).norm() < 1e-15);

  const StateMap m = StateMap::conjugation(ImplementerKind::Antiunitary, random_unitary(3, rng),
                                           MapDomain::StatesOnly);
  const StateMap back = state_map_from_json(json::parse(to_json(m).dump()));
  CHECK(back.kind() == StateMap::Kind::AntiunitaryConj);
  CHECK(back.domain() == MapDomain::StatesOnly);
  CHECK(back.implementer()->matrix() == m.implementer()->matrix());

  const StateMap dep = state_map_from_json(to_json(named_nonisometry(NamedMap::Depolarizing, 2, 0.25)));
  CHECK(dep.parameter() == 0.25);
  CHECK(code_of([] { state_map_from_json(json::parse(R"({"kind": "teleport"})")); }) ==
        ErrorCode::ParseError);
  CHECK_THROWS_AS(to_json(StateMap::identity(2).as_oracle()), Error);
}

TEST_CASE("tolerance overrides") {
  Tolerances t;
  t.set("slack", 1e-9);
  CHECK(t.slack == 1e-9);
  CHECK(code_of([&] { t.set("bogus", 1.0); }) == ErrorCode::InvalidParameter);
  CHECK(code_of([&] { t.set("witness", -1.0); }) == ErrorCode::InvalidParameter);
}

TEST_CASE("verification reports are deterministic and replayable") {
  SuiteConfig cfg;
  cfg.samples = 30;
  const std::vector<int> dims{3, 1, 2};
  const json a = run_verification("ortho-eq", dims, cfg);
  const json b = run_verification("ortho-eq", dims, cfg);
  CHECK(a.dump() == b.dump());
  CHECK(a["schema"] == "qsm-report/1");
  CHECK(a["config"]["dims"] == json::array({1, 2, 3}));
  CHECK(a["reports"][0]["dim"] == 1);
  // A single-dim run reproduces the corresponding entry.
  const std::vector<int> two{2};
  CHECK(run_verification("ortho-eq", two, cfg)["reports"][0].dump() == a["reports"][1].dump());
  CHECK_THROWS_AS(run_suite("lemma7", 2, cfg), Error);
}

}  // TEST_SUITE
