#pragma once

#include <string>
#include <vector>

namespace heraldq {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;  ///< measured values against targets
};

/// Runs the nine end-to-end acceptance checks at their stated tolerances.
std::vector<CriterionResult> run_acceptance();

/// "PASS  <id>  <title>  <detail>" lines.
std::string format_results(const std::vector<CriterionResult>& results);

}  // namespace heraldq
