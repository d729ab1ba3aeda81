#pragma once

#include <cstdint>
#include <string>

#include "qsm/io.hpp"

namespace qsm {

inline constexpr const char* kReportSchema = "qsm-report/1";

/// Outcome of one verification suite at one dimension.
struct ExperimentReport {
  std::string lemma;
  int dim = 0;
  std::uint64_t seed = 0;
  bool pass = false;
  json witnesses = json::array();
  double max_violation = 0.0;
  int budget = 0;
  /// Per-check breakdown: name -> { value, threshold, pass }.
  json checks = json::object();

  /// Records a "value <= threshold" check and folds it into pass/max_violation
  /// (violation = value - threshold when positive).
  void check_at_most(const std::string& name, double value, double threshold);
  /// Records a boolean check.
  void check_true(const std::string& name, bool ok, const json& detail = {});
  /// True when every recorded check passed.
  bool all_checks_pass() const;
};

json to_json(const ExperimentReport& r);

}  // namespace qsm
