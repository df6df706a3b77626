#pragma once

// The acceptance gates. Each criterion runs a fixed, seeded workload and
// reports measured values next to their pinned tolerances. Shared by the
// acceptance test binary and the `verify-all` command.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dixie {

inline constexpr int kCriterionCount = 12;

struct VerifyOptions {
  bool quick = false;  ///< reduced workloads for a smoke run
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  ///< one line: measured values and tolerances
  std::vector<std::pair<std::string, double>> metrics;
  double seconds = 0.0;
};

/// id in 1..kCriterionCount.
CriterionResult run_criterion(int id, const VerifyOptions& options = {});
std::vector<CriterionResult> run_all_criteria(const VerifyOptions& options = {});

}  // namespace dixie
