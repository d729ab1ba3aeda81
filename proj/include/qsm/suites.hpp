#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qsm/report.hpp"

namespace qsm {

/// Thresholds used by the verification suites; every one can be overridden
/// by name.
struct Tolerances {
  double witness = 1e-9;        // Lemma-style equalities and the d_1 = 2 test
  double orthogonality = 1e-8;  // ||XY||_1 relative threshold
  double slack = 1e-7;          // ball slack in the uniqueness search
  double separation = 1e-5;     // allowed separation, relative to eps
  double isometry = 1e-8;       // |d(phi A, phi B) - d(A, B)|
  double accept = 1e-6;         // reconstruction residual
  double purity = 1e-8;         // purity defect of probe images

  /// Throws InvalidParameter for an unknown name or a non-positive value.
  void set(std::string_view name, double value);
  json to_json() const;
};

struct SuiteConfig {
  std::uint64_t seed = 1;
  /// Sampled pairs per check; the lemma3 suite runs samples / 10
  /// configurations.
  int samples = 200;
  /// Proposals per uniqueness search.
  int budget = 10000;
  Tolerances tol;
};

/// lemma1, lemma3, thm-bures-D, thm-bures-S, thm-trace-D, thm-trace-S, ortho-eq.
const std::vector<std::string>& suite_ids();
bool is_suite_id(std::string_view id);

/// Runs one suite at one dimension. The random stream depends only on
/// (seed, dim), so reports are reproducible from their own contents.
ExperimentReport run_suite(std::string_view id, int dim, const SuiteConfig& cfg);

/// Runs a suite across dims and assembles the versioned report document
/// (reports ordered by dim).
json run_verification(std::string_view id, std::span<const int> dims, const SuiteConfig& cfg);

}  // namespace qsm
