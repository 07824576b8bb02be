#ifndef HMFLOW_VERIFY_HPP
#define HMFLOW_VERIFY_HPP

#include <string>
#include <vector>

namespace hmflow {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Invariant suites behind `verify`. The fast level covers closed-form and
/// cheap property checks; full adds the ODE cross-checks and short solver
/// runs. Each check catches its own exceptions and reports them as failures.
std::vector<CheckResult> run_verification(bool full);

}  // namespace hmflow

#endif
