// Full-scale verification suite: every check at its production sample size,
// one pass/fail line per check. Nonzero exit if anything fails.

#include <iostream>

#include "randsum/selftest.hpp"

int main() {
    randsum::SelftestConfig config; // full-scale defaults
    const std::vector<randsum::CheckResult> results = randsum::run_acceptance_checks(config);
    std::cout << randsum::render_report(results);
    for (const randsum::CheckResult& r : results)
        if (!r.pass) return 1;
    return 0;
}
