#pragma once

#include <string>
#include <vector>

namespace crn {

struct DiagnosticResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Quick invariant sweep over toy instances: channel algebra, sensing lags,
// strategy simplex and trust weights after a short simulation, and a
// supermodularity probe on a small stage game.
std::vector<DiagnosticResult> run_diagnostics();

}  // namespace crn
