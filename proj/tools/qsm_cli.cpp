// qsm: metric computations, verification suites and implementer reconstruction.
//
// Exit codes: 0 pass, 1 property failure, 2 usage or parse error.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsm/io.hpp"
#include "qsm/isomaps.hpp"
#include "qsm/metrics.hpp"
#include "qsm/suites.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int dim_cap() {
  const char* env = std::getenv("QSM_DIM_CAP");
  if (env == nullptr || *env == '\0') return 64;
  try {
    std::size_t used = 0;
    const int cap = std::stoi(env, &used);
    if (used != std::string(env).size() || cap < 1) throw std::invalid_argument(env);
    return cap;
  } catch (const std::exception&) {
    throw UsageError(std::string("QSM_DIM_CAP must be a positive integer, got '") + env + "'");
  }
}

int parse_positive(const std::string& text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw UsageError("not an integer: '" + text + "'");
  return v;
}

// "1,2,4", "2..6" or a mix such as "1,3..5".
std::vector<int> parse_dims(const std::string& spec, int cap) {
  std::vector<int> dims;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto range = item.find("..");
    if (range == std::string::npos) {
      dims.push_back(parse_positive(item));
    } else {
      const int lo = parse_positive(item.substr(0, range));
      const int hi = parse_positive(item.substr(range + 2));
      if (hi < lo) throw UsageError("empty dimension range '" + item + "'");
      for (int d = lo; d <= hi; ++d) dims.push_back(d);
    }
  }
  if (dims.empty()) throw UsageError("no dimensions given");
  for (int d : dims) {
    if (d < 1 || d > cap) {
      throw UsageError("dimension " + std::to_string(d) + " outside [1, " + std::to_string(cap) +
                       "] (raise the cap with QSM_DIM_CAP)");
    }
  }
  return dims;
}

void apply_tolerances(qsm::Tolerances& tol, const std::vector<std::string>& overrides) {
  for (const std::string& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects name=value, got '" + o + "'");
    double value = 0.0;
    try {
      std::size_t used = 0;
      value = std::stod(o.substr(eq + 1), &used);
      if (used != o.size() - eq - 1) throw std::invalid_argument(o);
    } catch (const std::exception&) {
      throw UsageError("bad tolerance value in '" + o + "'");
    }
    tol.set(o.substr(0, eq), value);
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

void emit(const qsm::json& doc, const std::string& out_path) {
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + out_path + "'");
  out << text;
}

// Accepts either a matrix document or a pure-state vector document.
qsm::DensityOperator load_density(const std::string& path) {
  const qsm::json j = qsm::load_json_file(path);
  if (j.is_object() && j.contains("vector")) {
    return qsm::pure_state_from_json(j).as_projection().density();
  }
  return qsm::DensityOperator(qsm::hermitian_from_json(j));
}

int cmd_metric(const std::string& file_a, const std::string& file_b, const std::string& metric) {
  const qsm::DensityOperator a = load_density(file_a);
  const qsm::DensityOperator b = load_density(file_b);
  qsm::require_same_dim(a.op(), b.op());
  qsm::json out{{"dim", a.dim()},
                {"fidelity", qsm::fidelity(a, b)},
                {"orthogonal", qsm::are_orthogonal(a, b)}};
  if (metric == "all" || qsm::metric_from_string(metric) == qsm::MetricKind::Bures) {
    out["bures"] = qsm::bures_distance(a, b);
  }
  if (metric == "all" || qsm::metric_from_string(metric) == qsm::MetricKind::TraceNorm) {
    out["trace"] = qsm::trace_distance(a, b);
  }
  std::cout << out.dump(2) << "\n";
  return kExitPass;
}

struct VerifyOptions {
  std::string id;
  std::string dims = "1,2,3,4,6";
  std::uint64_t seed = 1;
  int samples = 200;
  int budget = 10000;
  std::vector<std::string> tol;
  std::string out;
  bool timestamp = false;
};

int cmd_verify(const VerifyOptions& o) {
  if (!qsm::is_suite_id(o.id)) throw UsageError("unknown suite '" + o.id + "'");
  const std::vector<int> dims = parse_dims(o.dims, dim_cap());
  qsm::SuiteConfig cfg;
  cfg.seed = o.seed;
  cfg.samples = o.samples;
  cfg.budget = o.budget;
  apply_tolerances(cfg.tol, o.tol);
  qsm::json doc = qsm::run_verification(o.id, dims, cfg);
  if (o.timestamp) doc["metadata"] = qsm::json{{"generated_at", utc_timestamp()}};
  emit(doc, o.out);
  return doc.at("pass").get<bool>() ? kExitPass : kExitFail;
}

struct ReconstructOptions {
  std::string target;
  int dim = 3;
  std::uint64_t seed = 1;
  double param = -1.0;
  std::string domain = "density";
  std::vector<std::string> tol;
  std::string out;
};

qsm::StateMap build_map(const ReconstructOptions& o, const qsm::RngStream& rng) {
  using qsm::NamedMap;
  const qsm::MapDomain domain = qsm::map_domain_from_string(o.domain);
  const int n = o.dim;
  if (n < 1 || n > dim_cap()) throw UsageError("--dim outside [1, " + std::to_string(dim_cap()) + "]");
  const std::string& t = o.target;
  if (t == "identity") return qsm::StateMap::identity(n, domain);
  if (t == "transpose") return qsm::StateMap::transpose(n, domain);
  if (t == "random-unitary" || t == "random-antiunitary") {
    qsm::RngStream sub = rng.substream(7);
    const auto kind = t == "random-unitary" ? qsm::ImplementerKind::Unitary
                                            : qsm::ImplementerKind::Antiunitary;
    return qsm::StateMap::conjugation(kind, qsm::random_unitary(n, sub), domain);
  }
  if (t == "depolarizing") {
    return qsm::named_nonisometry(NamedMap::Depolarizing, n, o.param < 0 ? 0.5 : o.param)
        .with_domain(domain);
  }
  if (t == "pinching") return qsm::named_nonisometry(NamedMap::Pinching, n).with_domain(domain);
  if (t == "trace-rescale") {
    return qsm::named_nonisometry(NamedMap::TraceRescale, n, o.param < 0 ? 2.0 : o.param)
        .with_domain(domain);
  }
  return qsm::state_map_from_json(qsm::load_json_file(t));
}

int cmd_reconstruct(const ReconstructOptions& o) {
  const qsm::RngStream rng(o.seed, 0);
  const qsm::StateMap map = build_map(o, rng);
  qsm::Tolerances tol;
  apply_tolerances(tol, o.tol);
  qsm::ReconstructionSettings settings;
  settings.purity_tol = tol.purity;
  settings.accept_tol = tol.accept;
  qsm::json doc{{"schema", qsm::kReportSchema},
                {"map", map.label()},
                {"dim", map.dim()},
                {"domain", std::string(qsm::to_string(map.domain()))},
                {"seed", o.seed}};
  int code = kExitPass;
  try {
    const qsm::ReconstructionResult r =
        qsm::reconstruct_implementer(map.as_oracle(map.label()), rng.substream(1), settings);
    doc["pass"] = true;
    doc["reconstruction"] = qsm::to_json(r);
  } catch (const qsm::Error& e) {
    if (e.code() != qsm::ErrorCode::NotImplementable &&
        e.code() != qsm::ErrorCode::NotIsometryEvidence) {
      throw;
    }
    doc["pass"] = false;
    doc["error"] = qsm::json{{"code", qsm::to_string(e.code())}, {"message", e.what()}};
    if (e.code() == qsm::ErrorCode::NotImplementable) doc["residual"] = e.value();
    code = kExitFail;
  }
  emit(doc, o.out);
  return code;
}

bool is_usage_code(qsm::ErrorCode c) {
  switch (c) {
    case qsm::ErrorCode::ParseError:
    case qsm::ErrorCode::DimensionMismatch:
    case qsm::ErrorCode::InvalidParameter:
    case qsm::ErrorCode::NotPositiveSemidefinite:
    case qsm::ErrorCode::NonFinite:
    case qsm::ErrorCode::InvalidVector:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Metric geometry of quantum states: distances, verification suites, reconstruction"};
  app.require_subcommand(1);

  std::string file_a, file_b, metric = "all";
  auto* metric_cmd = app.add_subcommand("metric", "Fidelity, Bures and trace distance of two inputs");
  metric_cmd->add_option("A", file_a, "First density matrix (JSON)")->required();
  metric_cmd->add_option("B", file_b, "Second density matrix (JSON)")->required();
  metric_cmd->add_option("--metric", metric, "bures, trace or all")->capture_default_str();

  VerifyOptions vo;
  auto* verify_cmd = app.add_subcommand("verify", "Run a verification suite");
  verify_cmd->add_option("id", vo.id, "Suite id")->required();
  verify_cmd->add_option("--dims", vo.dims, "Dimensions, e.g. 1,2,4 or 2..6")->capture_default_str();
  verify_cmd->add_option("--seed", vo.seed, "Random seed")->capture_default_str();
  verify_cmd->add_option("--samples", vo.samples, "Samples per check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_option("--budget", vo.budget, "Proposals per uniqueness search")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  verify_cmd->add_option("--tol", vo.tol, "Tolerance override name=value (repeatable)");
  verify_cmd->add_option("--out", vo.out, "Report path (default stdout)");
  verify_cmd->add_flag("--timestamp", vo.timestamp, "Add a generation time under 'metadata'");

  ReconstructOptions ro;
  auto* rec_cmd = app.add_subcommand("reconstruct", "Recover the implementer of an isometry");
  rec_cmd
      ->add_option("map", ro.target,
                   "Builtin (identity, transpose, depolarizing, pinching, trace-rescale, "
                   "random-unitary, random-antiunitary) or a map JSON file")
      ->required();
  rec_cmd->add_option("--dim", ro.dim, "Dimension for builtins")->capture_default_str();
  rec_cmd->add_option("--seed", ro.seed, "Random seed")->capture_default_str();
  rec_cmd->add_option("--param", ro.param, "Depolarizing p or rescale factor c");
  rec_cmd->add_option("--domain", ro.domain, "density or states")->capture_default_str();
  rec_cmd->add_option("--tol", ro.tol, "Tolerance override name=value (repeatable)");
  rec_cmd->add_option("--out", ro.out, "Report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (metric_cmd->parsed()) return cmd_metric(file_a, file_b, metric);
    if (verify_cmd->parsed()) return cmd_verify(vo);
    return cmd_reconstruct(ro);
  } catch (const UsageError& e) {
    std::cerr << "qsm: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qsm::Error& e) {
    std::cerr << "qsm: " << qsm::to_string(e.code()) << ": " << e.what() << "\n";
    return is_usage_code(e.code()) ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "qsm: " << e.what() << "\n";
    return kExitFail;
  }
}
