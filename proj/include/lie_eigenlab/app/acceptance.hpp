#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lie_eigenlab/app/report.hpp"

namespace lie::app {

struct CriterionInfo {
  int id = 0;
  std::string key;
  std::string title;
  double budget_seconds = 0.0;  // 0: no budget
};

const std::vector<CriterionInfo>& criteria();

/// Maps keys ("casimir") or numbers ("1") to criterion ids; empty selects
/// all. Unknown names raise ConfigError.
std::vector<int> select_criteria(const std::vector<std::string>& only);

struct CriterionResult {
  CriterionInfo info;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  double seconds = 0.0;

  bool passed() const;
  bool over_budget() const { return info.budget_seconds > 0.0 && seconds > info.budget_seconds; }
};

/// Runs one criterion. Exceptions are caught and recorded as a failed
/// "completed" check.
CriterionResult run_criterion(int id, std::uint64_t seed = 1);

/// "[PASS] 1 casimir: title (0.4 s)" followed by indented sub-lines.
std::string format_criterion(const CriterionResult& result);

}  // namespace lie::app
