#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace randsum {

struct CheckResult {
    std::string id;
    bool pass = false;
    std::string detail;
};

/*
 * The verification suite: every analytic claim the library makes is checked
 * against an independent route (exact law, refined discretization, or a
 * seeded simulation). `n_standard` sizes the ordinary Monte Carlo runs and
 * `n_large` the high-resolution variance discrimination run.
 */
struct SelftestConfig {
    std::uint64_t n_standard = 1'000'000;
    std::uint64_t n_large = 10'000'000;
    std::uint64_t seed = 912'662'041;
    bool include_determinism = true;
};

std::vector<CheckResult> run_acceptance_checks(const SelftestConfig& config);

/// Fixed-format table, one line per check; byte-stable for a given config.
std::string render_report(const std::vector<CheckResult>& results);

/// Reduced-size suite (n = 1e5) printed to `os`; returns 0 iff all pass.
int selftest(std::ostream& os, std::uint64_t seed = SelftestConfig{}.seed);

} // namespace randsum
