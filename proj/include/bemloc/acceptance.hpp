#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace bemloc {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
};

/// Runs acceptance criteria 1-9. Progress goes to `log` when given.
std::vector<CriterionResult> run_acceptance(std::ostream* log = nullptr);

/// "[PASS] 3 title: detail"
std::string format_result(const CriterionResult& r);

}  // namespace bemloc
