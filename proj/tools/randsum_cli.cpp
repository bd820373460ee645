// Command-line front end: `run` executes a scenario file and writes its
// artifacts, `selftest` runs the reduced verification suite.
//
// Exit codes: 0 success, 2 comparison failed, 3 parse error, 4 validation
// error, 5 solver/model error, 1 anything else.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "randsum/errors.hpp"
#include "randsum/scenario.hpp"
#include "randsum/selftest.hpp"

namespace {

int run_command(const std::string& scenario_path, const std::string& out_dir,
                const randsum::RunOverrides& overrides) {
    const randsum::Scenario scenario = randsum::load_scenario_file(scenario_path);
    for (const std::string& w : scenario.warnings) std::cerr << "warning: " << w << "\n";
    const randsum::RunResult result = randsum::run_scenario(scenario, out_dir, overrides);
    for (const std::string& f : result.files_written) std::cout << "wrote " << f << "\n";
    if (result.exit_code != 0) std::cerr << result.message << "\n";
    return result.exit_code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stopped random sums: analytic characteristics, survival curves and "
                 "seeded simulation"};
    // --h is a grid override below, so help stays long-form only.
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_positional = "out";
    std::optional<std::string> out_flag;
    randsum::RunOverrides overrides;
    std::optional<std::uint64_t> seed_flag, n_flag;
    std::optional<double> tmax_flag, h_flag;

    CLI::App* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("out_dir", out_positional, "output directory (default: out)");
    run->add_option("--out", out_flag, "output directory (overrides the positional)");
    run->add_option("--seed", seed_flag, "override sim.seed");
    run->add_option("--n", n_flag, "override sim.n");
    run->add_option("--t-max", tmax_flag, "override grid.t_max");
    run->add_option("--h", h_flag, "override grid.h");
    run->add_option("--format", overrides.format, "curve output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));

    std::uint64_t selftest_seed = randsum::SelftestConfig{}.seed;
    CLI::App* st = app.add_subcommand("selftest", "run the reduced verification suite");
    st->add_option("--seed", selftest_seed, "simulation seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (st->parsed()) return randsum::selftest(std::cout, selftest_seed);
        overrides.seed = seed_flag;
        overrides.n = n_flag;
        overrides.t_max = tmax_flag;
        overrides.h = h_flag;
        return run_command(scenario_path, out_flag.value_or(out_positional), overrides);
    } catch (const randsum::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 3;
    } catch (const randsum::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 4;
    } catch (const randsum::Error& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
