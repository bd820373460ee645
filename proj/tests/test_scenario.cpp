#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "randsum/scenario.hpp"
#include "randsum/simulate.hpp"
#include "randsum/volterra.hpp"

using namespace randsum;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    REQUIRE(is.good());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

constexpr const char* kMinThresholdScenario = R"({
  "target": "random_sum",
  "law": {"coupling": "min_threshold",
          "tau": {"kind": "exponential", "rate": 1.0},
          "eta": {"kind": "exponential", "rate": 2.0}},
  "grid": {"t_max": 10.0, "h": 0.01},
  "sim": {"n": 2000, "seed": 5},
  "outputs": ["moments", "survival"]
})";

} // namespace

TEST_CASE("scenario parsing: happy path and defaults") {
    const Scenario s = parse_scenario_json(kMinThresholdScenario, "fixture");
    CHECK(s.target == Target::random_sum);
    CHECK(s.law.has_value());
    CHECK(s.law->q() == doctest::Approx(1.0 / 3.0));
    CHECK(s.grid.t_max == 10.0);
    CHECK(s.sim.n == 2000);
    CHECK(s.outputs.size() == 2);

    // grid/sim fall back to defaults when omitted.
    const Scenario d = parse_scenario_json(R"({
      "target": "ssqs",
      "model": {"model": "ssqs", "lambda": 1.0,
                "service": {"kind": "exponential", "rate": 2.0}},
      "outputs": ["moments"]
    })");
    CHECK(d.grid.h == 0.01);
    CHECK(d.sim.n == 100000);
}

TEST_CASE("scenario parsing: error paths carry json locations") {
    CHECK_THROWS_AS(parse_scenario_json("{nope"), ParseError);

    auto message_of = [](const std::string& text) {
        try {
            parse_scenario_json(text);
        } catch (const ValidationError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };

    CHECK(message_of(R"({"target": "random_sum", "outputs": ["moments"]})")
              .find("scenario.law") != std::string::npos);
    CHECK(message_of(R"({"target": "random_sum",
        "law": {"coupling": "min_threshold", "tau": {"kind": "exponential", "rate": -1.0},
                "eta": {"kind": "exponential", "rate": 2.0}},
        "outputs": ["moments"]})")
              .find("law.tau.rate") != std::string::npos);
    CHECK(message_of(R"({"target": "random_sum",
        "law": {"coupling": "waltz", "tau": {"kind": "exponential", "rate": 1.0},
                "eta": {"kind": "exponential", "rate": 2.0}},
        "outputs": ["moments"]})")
              .find("law.coupling") != std::string::npos);
    CHECK(message_of(R"({"target": "ssqs",
        "model": {"model": "ssqs", "lambda": 1.0,
                  "service": {"kind": "exponential", "rate": 2.0}},
        "outputs": ["warp"]})")
              .find("outputs") != std::string::npos);
}

TEST_CASE("wire-format helpers") {
    const ScalarDistribution d =
        parse_distribution_json(R"({"kind": "erlang", "shape": 2, "rate": 3.0})");
    CHECK(d.mean() == doctest::Approx(2.0 / 3.0));
    const JointStepLaw law = parse_law_json(
        R"({"coupling": "independent", "zeta": {"kind": "exponential", "rate": 1.0}, "q": 0.5})");
    CHECK(law.q() == 0.5);
    CHECK_THROWS_AS(parse_law_json("[1,2]"), ValidationError);
}

TEST_CASE("eta atom at zero is allowed but flagged") {
    const Scenario s = parse_scenario_json(R"({
      "target": "random_sum",
      "law": {"coupling": "min_threshold",
              "tau": {"kind": "exponential", "rate": 1.0},
              "eta": {"kind": "tabulated", "grid": [0.0, 1.0], "cdf": [0.25, 1.0]}},
      "outputs": ["moments"]
    })");
    REQUIRE(s.warnings.size() == 1);
    CHECK(s.warnings[0].find("atom") != std::string::npos);
}

TEST_CASE("run: survival artifact matches the exact law") {
    const fs::path dir = fresh_dir("randsum_run_survival");
    const Scenario s = parse_scenario_json(kMinThresholdScenario, "fixture");
    const RunResult r = run_scenario(s, dir.string());
    CHECK(r.exit_code == 0);
    REQUIRE(fs::exists(dir / "survival.csv"));
    REQUIRE(fs::exists(dir / "summary.json"));

    std::ifstream is(dir / "survival.csv");
    const SurvivalCurve curve = SurvivalCurve::read_csv(is);
    double worst = 0.0;
    for (std::size_t i = 0; i < curve.values.size(); ++i)
        worst = std::max(worst,
                         std::abs(curve.values[i] - std::exp(-0.01 * static_cast<double>(i))));
    CHECK(worst <= 5e-4);

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("symbols").at("q").get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(summary.at("provenance").at("version").get<std::string>() == "0.1.0");
}

TEST_CASE("run: queue scenario symbols and comparison") {
    const fs::path dir = fresh_dir("randsum_run_ssqs");
    Scenario s = parse_scenario_json(R"({
      "target": "ssqs",
      "model": {"model": "ssqs", "lambda": 1.0,
                "service": {"kind": "exponential", "rate": 2.0}},
      "grid": {"t_max": 50.0, "h": 0.05},
      "sim": {"n": 50000, "seed": 13},
      "outputs": ["moments", "simulate", "compare"]
    })", "ssqs_mm1");
    const RunResult r = run_scenario(s, dir.string());
    CHECK(r.exit_code == 0);
    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary.at("symbols").at("p0").get<double>() == doctest::Approx(0.5));
    CHECK(summary.at("symbols").at("p1").get<double>() == doctest::Approx(0.25));
    const auto comparison = nlohmann::json::parse(slurp(dir / "comparison.json"));
    CHECK(comparison.at("verdict").get<std::string>() == "PASS");
    CHECK(fs::exists(dir / "empirical.csv"));
}

TEST_CASE("run: survival is rejected for the queue target") {
    const Scenario s = parse_scenario_json(R"({
      "target": "ssqs",
      "model": {"model": "ssqs", "lambda": 1.0,
                "service": {"kind": "exponential", "rate": 2.0}},
      "outputs": ["survival"]
    })");
    CHECK_THROWS_AS(run_scenario(s, fresh_dir("randsum_run_bad").string()), ValidationError);
}

TEST_CASE("run: overrides take precedence and json format switches outputs") {
    const fs::path dir = fresh_dir("randsum_run_override");
    const Scenario s = parse_scenario_json(kMinThresholdScenario, "fixture");
    RunOverrides ov;
    ov.t_max = 5.0;
    ov.h = 0.05;
    ov.format = "json";
    const RunResult r = run_scenario(s, dir.string(), ov);
    CHECK(r.exit_code == 0);
    CHECK(fs::exists(dir / "survival.json"));
    CHECK_FALSE(fs::exists(dir / "survival.csv"));
    const auto curve = nlohmann::json::parse(slurp(dir / "survival.json"));
    CHECK(curve.at("t").size() == 101); // 5.0 / 0.05 + 1 nodes
}

TEST_CASE("run: identical seeds give byte-identical artifacts") {
    const Scenario s = parse_scenario_json(R"({
      "target": "random_sum",
      "law": {"coupling": "independent", "zeta": {"kind": "exponential", "rate": 2.0}, "q": 0.5},
      "grid": {"t_max": 10.0, "h": 0.02},
      "sim": {"n": 20000, "seed": 42},
      "outputs": ["simulate"]
    })");
    const fs::path d1 = fresh_dir("randsum_det_a");
    const fs::path d2 = fresh_dir("randsum_det_b");
    run_scenario(s, d1.string());
    run_scenario(s, d2.string());
    CHECK(slurp(d1 / "empirical.csv") == slurp(d2 / "empirical.csv"));
    CHECK(slurp(d1 / "summary.json") == slurp(d2 / "summary.json"));

    // A different seed changes the empirical artifact.
    RunOverrides ov;
    ov.seed = 43;
    const fs::path d3 = fresh_dir("randsum_det_c");
    run_scenario(s, d3.string(), ov);
    CHECK(slurp(d1 / "empirical.csv") != slurp(d3 / "empirical.csv"));
}
