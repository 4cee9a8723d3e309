// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "risisac/scenario.hpp"

namespace risisac {

struct SelfCheckOptions {
  /// Scenarios for the channel-dependent checks. Structural checks always run.
  std::vector<ScenarioConfig> scenarios{ScenarioConfig{}};
  /// Test hook: flips the sign of the analytic gradient inside the checks.
  bool corrupt_gradient = false;
  std::uint64_t seed = 7;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfCheckReport {
  std::vector<CheckResult> checks;
  int scenario_checks = 0;

  bool all_passed() const;
  void print(std::ostream& os) const;
};

SelfCheckReport self_check(const SelfCheckOptions& options = {});

}  // namespace risisac
