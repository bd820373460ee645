#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "randsum/models.hpp"
#include "randsum/step_law.hpp"

namespace randsum {

enum class Target { random_sum, geiger, redundant, ssqs };

enum class OutputKind { moments, survival, laplace, limit_check, simulate, compare };

struct GridSpec {
    double t_max = 10.0;
    double h = 0.01;
};

struct SimSpec {
    std::uint64_t n = 100'000;
    std::uint64_t seed = 1;
};

/*
 * A runnable experiment description, normally loaded from JSON:
 *
 *   {
 *     "target": "random_sum" | "geiger" | "redundant" | "ssqs",
 *     "law":   { "coupling": "min_threshold", "tau": {...}, "eta": {...} },
 *     "model": { "model": "ssqs", "lambda": 1.0, "service": {...} },
 *     "grid":  { "t_max": 10.0, "h": 0.01 },
 *     "sim":   { "n": 1000000, "seed": 42 },
 *     "outputs": ["moments", "survival", "simulate", "compare"]
 *   }
 *
 * Distributions are objects like {"kind": "exponential", "rate": 1.0};
 * see parse_distribution_json for the full set.
 */
struct Scenario {
    Target target = Target::random_sum;
    std::optional<JointStepLaw> law;
    std::optional<GeigerModel> geiger;
    std::optional<RedundantModel> redundant;
    std::optional<SsqsModel> ssqs;
    GridSpec grid;
    SimSpec sim;
    std::vector<OutputKind> outputs;
    std::string name;
    std::vector<std::string> warnings; // non-fatal validation notes
};

Scenario parse_scenario_json(const std::string& text, const std::string& name_hint = "scenario");
Scenario load_scenario_file(const std::string& path);

/// Standalone parsers for the wire formats (used by tests and tools).
ScalarDistribution parse_distribution_json(const std::string& text);
JointStepLaw parse_law_json(const std::string& text);

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n;
    std::optional<double> t_max;
    std::optional<double> h;
    std::string format = "csv"; // "csv" or "json" for curve outputs
};

struct RunResult {
    int exit_code = 0; // 0 ok, 2 comparison failed
    std::vector<std::string> files_written;
    std::string message;
};

/// Executes the scenario, writing the requested artifacts into out_dir.
/// Throws on errors; a failed comparison is reported via exit_code 2.
RunResult run_scenario(const Scenario& scenario, const std::string& out_dir,
                       const RunOverrides& overrides = {});

/// JSON rendering of a simulation report (stable key order).
std::string sim_report_json(const struct SimReport& report);

} // namespace randsum
