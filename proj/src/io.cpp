#include "qsm/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace qsm {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    parse_fail("complex entries must be [re, im] number pairs");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

int dim_from_json(const json& j) {
  if (!j.is_object()) parse_fail("expected a JSON object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) parse_fail("missing integer 'dim'");
  const int n = j["dim"].get<int>();
  if (n < 1) parse_fail("'dim' must be >= 1");
  return n;
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return json{{"dim", m.rows()}, {"entries", std::move(rows)}};
}

Matrix matrix_from_json(const json& j) {
  const int n = dim_from_json(j);
  if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != std::size_t(n)) {
    parse_fail("'entries' must hold " + std::to_string(n) + " rows");
  }
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = j["entries"][std::size_t(i)];
    if (!row.is_array() || row.size() != std::size_t(n)) {
      parse_fail("row " + std::to_string(i) + " must hold " + std::to_string(n) + " entries");
    }
    for (int k = 0; k < n; ++k) m(i, k) = complex_from_json(row[std::size_t(k)]);
  }
  if (!m.allFinite()) parse_fail("matrix has non-finite entries");
  return m;
}

json to_json(const HermitianOperator& a) { return matrix_to_json(a.matrix()); }

HermitianOperator hermitian_from_json(const json& j) {
  const Matrix m = matrix_from_json(j);
  const double asym = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-12) {
    throw Error(ErrorCode::ParseError,
                "matrix is not Hermitian (max |a_ij - conj(a_ji)| = " + std::to_string(asym) + ")",
                asym);
  }
  return HermitianOperator(m);
}

json to_json(const PureState& v) {
  json entries = json::array();
  for (Eigen::Index i = 0; i < v.vector().size(); ++i) entries.push_back(complex_to_json(v.vector()(i)));
  return json{{"dim", v.dim()}, {"vector", std::move(entries)}};
}

PureState pure_state_from_json(const json& j) {
  const int n = dim_from_json(j);
  if (!j.contains("vector") || !j["vector"].is_array() || j["vector"].size() != std::size_t(n)) {
    parse_fail("'vector' must hold " + std::to_string(n) + " entries");
  }
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = complex_from_json(j["vector"][std::size_t(i)]);
  return PureState(v);
}

json to_json(const StateMap& m) {
  switch (m.kind()) {
    case StateMap::Kind::UnitaryConj:
    case StateMap::Kind::AntiunitaryConj:
      return json{{"kind", m.kind() == StateMap::Kind::UnitaryConj ? "unitary" : "antiunitary"},
                  {"U", matrix_to_json(m.implementer()->matrix())},
                  {"params", json{{"domain", to_string(m.domain())}}}};
    case StateMap::Kind::Named: {
      json params{{"name", to_string(*m.named())}, {"dim", m.dim()}, {"domain", to_string(m.domain())}};
      json out{{"kind", "named"}};
      if (*m.named() == NamedMap::Depolarizing) params["p"] = m.parameter();
      if (*m.named() == NamedMap::TraceRescale) params["c"] = m.parameter();
      if (*m.named() == NamedMap::Pinching) out["U"] = matrix_to_json(m.implementer()->matrix());
      out["params"] = std::move(params);
      return out;
    }
    case StateMap::Kind::Oracle:
      break;
  }
  throw Error(ErrorCode::InvalidParameter, "oracle maps have no serialized form");
}

StateMap state_map_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    parse_fail("state map needs a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  const json params = j.value("params", json::object());
  if (!params.is_object()) parse_fail("'params' must be an object");
  MapDomain domain = MapDomain::FullDensity;
  if (params.contains("domain")) {
    const std::string d = params["domain"].get<std::string>();
    if (d != "states" && d != "density") parse_fail("unknown domain '" + d + "'");
    domain = map_domain_from_string(d);
  }
  try {
    if (kind == "unitary" || kind == "antiunitary") {
      if (!j.contains("U")) parse_fail("conjugation map needs 'U'");
      return StateMap::conjugation(
          kind == "unitary" ? ImplementerKind::Unitary : ImplementerKind::Antiunitary,
          Unitary(matrix_from_json(j["U"])), domain);
    }
    if (kind == "named") {
      if (!params.contains("name") || !params["name"].is_string()) parse_fail("named map needs 'name'");
      const NamedMap id = named_map_from_string(params["name"].get<std::string>());
      std::optional<Unitary> basis;
      if (j.contains("U")) basis = Unitary(matrix_from_json(j["U"]));
      const int n = params.contains("dim") ? params["dim"].get<int>() : (basis ? basis->dim() : 0);
      double parameter = 0.0;
      if (id == NamedMap::Depolarizing) parameter = params.value("p", 0.0);
      if (id == NamedMap::TraceRescale) parameter = params.value("c", 1.0);
      return named_nonisometry(id, n, parameter, std::move(basis)).with_domain(domain);
    }
  } catch (const json::exception& e) {
    parse_fail(std::string("bad state map field: ") + e.what());
  }
  parse_fail("unknown map kind '" + kind + "'");
}

json to_json(const ReconstructionResult& r) {
  return json{{"U", matrix_to_json(r.u.matrix())},
              {"kind", to_string(r.kind)},
              {"residual", r.residual},
              {"phase_convention", r.phase_convention},
              {"probes", r.probes},
              {"validation_states", r.validation_states}};
}

json to_json(const IsometryReport& r) {
  return json{{"metric", to_string(r.metric)},
              {"pairs_tested", r.pairs_tested},
              {"max_deviation", r.max_deviation},
              {"seed", r.seed},
              {"mode", r.ran_concurrently ? "concurrent" : "serial"}};
}

json to_json(const PreservationReport& r) {
  json checks = json::array();
  for (const PropertyCheck& c : r.checks) {
    checks.push_back(json{{"name", c.name},
                          {"instances", c.instances},
                          {"max_violation", c.max_violation},
                          {"pass", c.pass}});
  }
  return json{{"checks", std::move(checks)}, {"pass", r.all_pass()}};
}

json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "'" + path.string() + "': " + e.what());
  }
}

}  // namespace qsm
