// selftest.hpp — The acceptance suite: every release criterion implemented
// as a check with its tolerance pinned in code. Shared between the
// acceptance test binary and the CLI `selftest` subcommand.

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace effdyn::selftest {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    double elapsed_ms = 0.0;
    std::string detail;
};

/// Runs all criteria, printing one "PASS/FAIL criterion N: ..." line per
/// criterion to `log`. Returns the individual results.
std::vector<CriterionResult> run_all(std::ostream& log);

/// True iff every criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace effdyn::selftest
