#include "qsm/report.hpp"

#include <algorithm>

namespace qsm {

void ExperimentReport::check_at_most(const std::string& name, double value, double threshold) {
  const bool ok = value <= threshold;
  checks[name] = json{{"value", value}, {"threshold", threshold}, {"pass", ok}};
  if (!ok) max_violation = std::max(max_violation, value - threshold);
}

void ExperimentReport::check_true(const std::string& name, bool ok, const json& detail) {
  json entry{{"pass", ok}};
  if (!detail.is_null()) entry["detail"] = detail;
  checks[name] = std::move(entry);
  if (!ok) max_violation = std::max(max_violation, 1.0);
}

bool ExperimentReport::all_checks_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const json& c) { return c.at("pass").get<bool>(); });
}

json to_json(const ExperimentReport& r) {
  return json{{"lemma", r.lemma},
              {"dim", r.dim},
              {"seed", r.seed},
              {"pass", r.pass},
              {"witnesses", r.witnesses},
              {"max_violation", r.max_violation},
              {"budget", r.budget},
              {"checks", r.checks}};
}

}  // namespace qsm
