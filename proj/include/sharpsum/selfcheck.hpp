#pragma once

#include <string>
#include <vector>

namespace sharpsum {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// A reduced invariant suite sized to run in a few seconds.
std::vector<CheckResult> run_selfcheck(unsigned workers = 1);

}  // namespace sharpsum
