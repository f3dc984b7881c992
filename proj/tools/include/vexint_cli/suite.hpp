#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vexint_cli/report.hpp"

namespace vexint::cli {

inline constexpr int criterion_count = 17;

std::string_view criterion_title(int id);

struct CriterionOutcome {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteResult {
  Report report;
  std::vector<CriterionOutcome> outcomes;

  bool passed() const;
};

/// Runs the listed criteria, or all of them when the list is empty. Criterion 17 reruns
/// criteria 1..16 and compares the two CSV reports byte for byte.
SuiteResult run_suite(std::uint64_t seed, std::span<const int> only = {});

}  // namespace vexint::cli
