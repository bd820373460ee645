#include "randsum/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "randsum/analytic.hpp"
#include "randsum/simulate.hpp"
#include "randsum/volterra.hpp"

namespace randsum {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

[[noreturn]] void fail_validation(const std::string& path, const std::string& why) {
    throw ValidationError(path + ": " + why);
}

double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail_validation(path, "expected a number");
    return j.get<double>();
}

double require_positive(const json& j, const std::string& path) {
    const double v = require_number(j, path);
    if (!(v > 0.0)) fail_validation(path, "must be > 0");
    return v;
}

const json& require_field(const json& j, const char* key, const std::string& path) {
    if (!j.is_object()) fail_validation(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail_validation(path + "." + key, "missing required field");
    return *it;
}

ScalarDistribution parse_distribution(const json& j, const std::string& path) {
    const json& kind = require_field(j, "kind", path);
    if (!kind.is_string()) fail_validation(path + ".kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "exponential")
        return ScalarDistribution::exponential(
            require_positive(require_field(j, "rate", path), path + ".rate"));
    if (k == "deterministic") {
        const double v = require_number(require_field(j, "value", path), path + ".value");
        if (v < 0.0) fail_validation(path + ".value", "must be >= 0");
        return ScalarDistribution::deterministic(v);
    }
    if (k == "uniform") {
        const double lo = require_number(require_field(j, "lo", path), path + ".lo");
        const double hi = require_number(require_field(j, "hi", path), path + ".hi");
        if (lo < 0.0) fail_validation(path + ".lo", "must be >= 0");
        if (!(hi > lo)) fail_validation(path + ".hi", "must be > lo");
        return ScalarDistribution::uniform(lo, hi);
    }
    if (k == "erlang") {
        const json& shape = require_field(j, "shape", path);
        if (!shape.is_number_integer() || shape.get<int>() < 1)
            fail_validation(path + ".shape", "must be an integer >= 1");
        return ScalarDistribution::erlang(
            shape.get<int>(), require_positive(require_field(j, "rate", path), path + ".rate"));
    }
    if (k == "tabulated") {
        const json& grid = require_field(j, "grid", path);
        const json& cdf = require_field(j, "cdf", path);
        if (!grid.is_array() || !cdf.is_array())
            fail_validation(path + ".grid/.cdf", "expected arrays");
        std::vector<double> g, c;
        for (const auto& v : grid) g.push_back(require_number(v, path + ".grid[]"));
        for (const auto& v : cdf) c.push_back(require_number(v, path + ".cdf[]"));
        try {
            return ScalarDistribution::tabulated(std::move(g), std::move(c));
        } catch (const ValidationError& e) {
            fail_validation(path, e.what());
        }
    }
    fail_validation(path + ".kind", "unknown kind '" + k +
                                        "' (expected exponential, deterministic, uniform, "
                                        "erlang or tabulated)");
}

JointStepLaw parse_law(const json& j, const std::string& path,
                       std::vector<std::string>* warnings) {
    const json& coupling = require_field(j, "coupling", path);
    if (!coupling.is_string()) fail_validation(path + ".coupling", "expected a string");
    const std::string c = coupling.get<std::string>();

    auto warn_eta_atom_at_zero = [&](const ScalarDistribution& eta) {
        if (warnings == nullptr) return;
        for (const PointMass& a : eta.atoms())
            if (a.x == 0.0 && a.mass > 0.0)
                warnings->push_back(path + ".eta carries an atom of mass " +
                                    std::to_string(a.mass) +
                                    " at 0 (instantaneous threshold); permitted but unusual");
    };

    if (c == "independent") {
        const double q = require_number(require_field(j, "q", path), path + ".q");
        if (!(q > 0.0 && q < 1.0)) fail_validation(path + ".q", "must lie strictly in (0,1)");
        return JointStepLaw::independent(
            parse_distribution(require_field(j, "zeta", path), path + ".zeta"), q);
    }
    if (c == "min_threshold" || c == "race_step" || c == "shifted_min") {
        ScalarDistribution tau = parse_distribution(require_field(j, "tau", path), path + ".tau");
        ScalarDistribution eta = parse_distribution(require_field(j, "eta", path), path + ".eta");
        warn_eta_atom_at_zero(eta);
        if (c == "min_threshold") return JointStepLaw::min_threshold(std::move(tau), std::move(eta));
        if (c == "race_step") return JointStepLaw::race_step(std::move(tau), std::move(eta));
        ScalarDistribution shift =
            parse_distribution(require_field(j, "shift", path), path + ".shift");
        return JointStepLaw::shifted_min(std::move(tau), std::move(eta), std::move(shift));
    }
    fail_validation(path + ".coupling", "unknown coupling '" + c + "'");
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
}

std::string format_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

json curve_to_json(const SurvivalCurve& c) {
    json t = json::array(), s = json::array();
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        t.push_back(c.t0 + c.h * static_cast<double>(i));
        s.push_back(c.values[i]);
    }
    return json{{"t", std::move(t)}, {"survival", std::move(s)}};
}

void write_text_file(const std::filesystem::path& p, const std::string& text,
                     RunResult& result) {
    std::ofstream os(p);
    if (!os) throw Error("cannot open " + p.string() + " for writing");
    os << text;
    result.files_written.push_back(p.string());
}

void write_curve(const SurvivalCurve& curve, const std::filesystem::path& dir,
                 const std::string& stem, const std::string& format, RunResult& result) {
    if (format == "json") {
        write_text_file(dir / (stem + ".json"), curve_to_json(curve).dump(2) + "\n", result);
        return;
    }
    std::ostringstream os;
    curve.write_csv(os);
    write_text_file(dir / (stem + ".csv"), os.str(), result);
}

} // namespace

ScalarDistribution parse_distribution_json(const std::string& text) {
    return parse_distribution(parse_text(text), "distribution");
}

JointStepLaw parse_law_json(const std::string& text) {
    return parse_law(parse_text(text), "law", nullptr);
}

Scenario parse_scenario_json(const std::string& text, const std::string& name_hint) {
    const json j = parse_text(text);
    Scenario s;
    s.name = name_hint;

    const json& target = require_field(j, "target", "scenario");
    if (!target.is_string()) fail_validation("scenario.target", "expected a string");
    const std::string t = target.get<std::string>();
    if (t == "random_sum") {
        s.target = Target::random_sum;
        s.law = parse_law(require_field(j, "law", "scenario"), "law", &s.warnings);
    } else if (t == "geiger" || t == "redundant" || t == "ssqs") {
        const json& m = require_field(j, "model", "scenario");
        const json& kind = require_field(m, "model", "model");
        if (!kind.is_string() || kind.get<std::string>() != t)
            fail_validation("model.model", "must repeat the scenario target '" + t + "'");
        const double lambda =
            require_positive(require_field(m, "lambda", "model"), "model.lambda");
        if (t == "geiger") {
            s.target = Target::geiger;
            s.geiger = GeigerModel{
                lambda, parse_distribution(require_field(m, "lock", "model"), "model.lock")};
            for (const PointMass& a : s.geiger->lock.atoms())
                if (a.x == 0.0 && a.mass > 0.0)
                    s.warnings.push_back(
                        "model.lock carries an atom at 0 (instantaneous unlock); permitted "
                        "but unusual");
        } else if (t == "redundant") {
            const double lp =
                require_number(require_field(m, "lambda_prime", "model"), "model.lambda_prime");
            if (lp < 0.0) fail_validation("model.lambda_prime", "must be >= 0");
            s.target = Target::redundant;
            s.redundant = RedundantModel{
                lambda, lp,
                parse_distribution(require_field(m, "repair", "model"), "model.repair")};
        } else {
            s.target = Target::ssqs;
            s.ssqs = SsqsModel{
                lambda, parse_distribution(require_field(m, "service", "model"), "model.service")};
        }
    } else {
        fail_validation("scenario.target", "unknown target '" + t + "'");
    }

    if (j.contains("grid")) {
        const json& g = j["grid"];
        s.grid.t_max = require_positive(require_field(g, "t_max", "grid"), "grid.t_max");
        s.grid.h = require_positive(require_field(g, "h", "grid"), "grid.h");
        if (!(s.grid.t_max >= 10.0 * s.grid.h))
            fail_validation("grid", "t_max must be at least 10 h");
    }
    if (j.contains("sim")) {
        const json& sim = j["sim"];
        const json& n = require_field(sim, "n", "sim");
        if (!n.is_number_integer() || n.get<std::int64_t>() < 1)
            fail_validation("sim.n", "must be an integer >= 1");
        s.sim.n = n.get<std::uint64_t>();
        const json& seed = require_field(sim, "seed", "sim");
        if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0)
            fail_validation("sim.seed", "must be a nonnegative integer");
        s.sim.seed = seed.get<std::uint64_t>();
    }

    const json& outputs = require_field(j, "outputs", "scenario");
    if (!outputs.is_array() || outputs.empty())
        fail_validation("scenario.outputs", "expected a nonempty array");
    const std::map<std::string, OutputKind> kinds{
        {"moments", OutputKind::moments},       {"survival", OutputKind::survival},
        {"laplace", OutputKind::laplace},       {"limit_check", OutputKind::limit_check},
        {"simulate", OutputKind::simulate},     {"compare", OutputKind::compare}};
    for (const auto& o : outputs) {
        if (!o.is_string()) fail_validation("scenario.outputs[]", "expected strings");
        auto it = kinds.find(o.get<std::string>());
        if (it == kinds.end())
            fail_validation("scenario.outputs[]", "unknown output '" + o.get<std::string>() + "'");
        s.outputs.push_back(it->second);
    }
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot read scenario file " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_scenario_json(buf.str(), std::filesystem::path(path).stem().string());
}

std::string sim_report_json(const SimReport& report) {
    json j;
    j["n"] = report.n;
    j["seed"] = report.seed;
    j["mean"] = report.mean;
    j["variance"] = report.variance;
    j["std_err_mean"] = report.std_err_mean;
    j["std_err_variance"] = report.std_err_variance;
    json extra = json::object();
    for (const auto& [k, v] : report.extra_scalars) extra[k] = v;
    j["extra"] = std::move(extra);
    j["empirical_survival"] = curve_to_json(report.empirical_survival);
    return j.dump(2) + "\n";
}

namespace {

bool wants(const Scenario& s, OutputKind k) {
    for (OutputKind o : s.outputs)
        if (o == k) return true;
    return false;
}

/// The step law behind the scenario's target, when one exists.
std::optional<JointStepLaw> scenario_law(const Scenario& s) {
    switch (s.target) {
        case Target::random_sum: return s.law;
        case Target::geiger: return s.geiger->step_law();
        case Target::redundant: return s.redundant->busy_period_law();
        case Target::ssqs: return std::nullopt;
    }
    return std::nullopt;
}

struct ComparisonRows {
    json rows = json::array();
    bool all_pass = true;

    void add_z(const std::string& name, double sim, double analytic, double se,
               double limit = 4.0) {
        const double z = se > 0.0 ? (sim - analytic) / se : 0.0;
        const bool ok = std::abs(z) <= limit;
        rows.push_back(json{{"name", name},
                            {"simulated", sim},
                            {"analytic", analytic},
                            {"z", z},
                            {"limit", limit},
                            {"pass", ok}});
        all_pass = all_pass && ok;
    }

    void add_abs(const std::string& name, double value, double target, double tol) {
        const bool ok = std::abs(value - target) <= tol;
        rows.push_back(json{{"name", name},
                            {"value", value},
                            {"target", target},
                            {"tolerance", tol},
                            {"pass", ok}});
        all_pass = all_pass && ok;
    }

    void add_ks(const std::string& name, const KsResult& ks) {
        rows.push_back(json{{"name", name},
                            {"statistic", ks.statistic},
                            {"critical", ks.critical},
                            {"pass", ks.pass}});
        all_pass = all_pass && ks.pass;
    }
};

} // namespace

RunResult run_scenario(const Scenario& scenario, const std::string& out_dir,
                       const RunOverrides& overrides) {
    RunResult result;
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    GridSpec grid = scenario.grid;
    SimSpec sim = scenario.sim;
    if (overrides.t_max) grid.t_max = *overrides.t_max;
    if (overrides.h) grid.h = *overrides.h;
    if (overrides.n) sim.n = *overrides.n;
    if (overrides.seed) sim.seed = *overrides.seed;
    if (overrides.format != "csv" && overrides.format != "json")
        throw ValidationError("format: must be 'csv' or 'json'");

    json symbols = json::object();
    const std::optional<JointStepLaw> law = scenario_law(scenario);

    // Analytic layer ------------------------------------------------------
    std::optional<GeigerCharacteristics> geiger_chars;
    std::optional<RedundantCharacteristics> redundant_chars;
    std::optional<SsqsCharacteristics> ssqs_chars;
    std::optional<StepMoments> law_moments;

    if (law) {
        law_moments = law->moments();
        symbols["q"] = law_moments->q;
        symbols["a"] = law_moments->a;
        symbols["sigma2"] = law_moments->sigma2;
        symbols["a0"] = law_moments->a0;
    }
    switch (scenario.target) {
        case Target::random_sum:
            symbols["mean_S"] = mean_random_sum(*law_moments);
            symbols["var_S"] = variance_random_sum(*law_moments);
            break;
        case Target::geiger: {
            geiger_chars = geiger_characteristics(*scenario.geiger, grid.t_max, grid.h);
            symbols["q"] = geiger_chars->q;
            symbols["mean_T"] = geiger_chars->mean_T;
            symbols["var_T"] = geiger_chars->var_T;
            break;
        }
        case Target::redundant: {
            redundant_chars = redundant_characteristics(*scenario.redundant);
            symbols["q"] = redundant_chars->q;
            symbols["mean_W1"] = redundant_chars->mean_w1;
            symbols["mean_Wk"] = redundant_chars->mean_wk;
            symbols["var_W1"] = redundant_chars->var_w1;
            symbols["var_Wk"] = redundant_chars->var_wk;
            symbols["alpha0_rate"] = redundant_chars->alpha0_survival.rate;
            symbols["alpha1_rate"] = redundant_chars->alpha1_survival.rate;
            break;
        }
        case Target::ssqs: {
            ssqs_chars = ssqs_characteristics(*scenario.ssqs);
            symbols["q"] = ssqs_chars->q;
            symbols["b"] = ssqs_chars->b;
            symbols["rho"] = ssqs_chars->rho;
            symbols["p0"] = ssqs_chars->p0;
            symbols["p1"] = ssqs_chars->p1;
            symbols["mean_alpha0"] = ssqs_chars->mean_alpha0;
            symbols["mean_alpha1"] = ssqs_chars->mean_alpha1;
            symbols["mean_alpha"] = ssqs_chars->mean_alpha;
            symbols["mean_T"] = ssqs_chars->mean_T;
            symbols["mean_beta"] = ssqs_chars->mean_beta;
            symbols["alpha0_atom"] = ssqs_chars->alpha0_law.atom_mass;
            symbols["alpha0_tail_rate"] = ssqs_chars->alpha0_law.tail_rate;
            symbols["alpha1_rate"] = ssqs_chars->alpha1_law.rate;
            break;
        }
    }

    // Survival curve -------------------------------------------------------
    std::optional<SurvivalCurve> survival;
    const bool needs_curve =
        wants(scenario, OutputKind::survival) || wants(scenario, OutputKind::compare);
    if (needs_curve) {
        if (scenario.target == Target::geiger) {
            survival = geiger_chars->survival;
        } else if (law) {
            survival = solve_survival(*law, grid.t_max, grid.h);
        } else if (wants(scenario, OutputKind::survival)) {
            throw ValidationError(
                "outputs: 'survival' is not available for target 'ssqs' (the cycle length "
                "is not a stopped random sum)");
        }
        if (survival && wants(scenario, OutputKind::survival))
            write_curve(*survival, dir, "survival", overrides.format, result);
    }

    // Laplace transform table ----------------------------------------------
    if (wants(scenario, OutputKind::laplace)) {
        if (!law)
            throw ValidationError("outputs: 'laplace' is not available for target 'ssqs'");
        const LaplaceTransforms lt = laplace_transforms(*law);
        std::ostringstream os;
        os << "z,psi,psi0,psi1,phi\n";
        for (int i = 0; i <= 200; ++i) {
            const double z = i == 0 ? 0.0 : std::pow(10.0, -2.0 + 4.0 * (i - 1) / 199.0);
            os << format_g(z) << ',' << format_g(lt.psi(z)) << ',' << format_g(lt.psi0(z)) << ','
               << format_g(lt.psi1(z)) << ',' << format_g(lt.phi(z)) << '\n';
        }
        write_text_file(dir / "laplace.csv", os.str(), result);
    }

    // Small-q limit diagnostic ----------------------------------------------
    if (wants(scenario, OutputKind::limit_check)) {
        if (!law)
            throw ValidationError("outputs: 'limit_check' is not available for target 'ssqs'");
        std::vector<double> z_grid;
        for (int i = 1; i <= 100; ++i) z_grid.push_back(0.1 * i);
        const LimitDiagnostics d = scaled_limit_diagnostics(*law, z_grid);
        symbols["limit_sup_error"] = d.sup_error;
    }

    // Simulation -------------------------------------------------------------
    SimOptions opts;
    opts.curve_t_max = grid.t_max;
    opts.curve_h = grid.h;
    json simulation_block;
    std::optional<SimReport> primary_report;
    std::optional<RedundantSimResult> redundant_sim;
    std::optional<SsqsSimResult> ssqs_sim;
    std::optional<RandomSumSimResult> random_sim;

    const bool needs_sim =
        wants(scenario, OutputKind::simulate) || wants(scenario, OutputKind::compare);
    if (needs_sim) {
        switch (scenario.target) {
            case Target::random_sum:
                random_sim = simulate_random_sum(*scenario.law, sim.n, sim.seed, opts);
                primary_report = random_sim->report;
                break;
            case Target::geiger:
                primary_report = simulate_geiger(*scenario.geiger, sim.n, sim.seed, opts);
                break;
            case Target::redundant:
                redundant_sim = simulate_redundant(*scenario.redundant, sim.n, sim.seed, opts);
                primary_report = redundant_sim->w1;
                break;
            case Target::ssqs:
                ssqs_sim = simulate_ssqs(*scenario.ssqs, sim.n, sim.seed, opts);
                primary_report = ssqs_sim->cycle;
                break;
        }
        if (wants(scenario, OutputKind::simulate)) {
            write_curve(primary_report->empirical_survival, dir, "empirical", overrides.format,
                        result);
            simulation_block = json::parse(sim_report_json(*primary_report));
            simulation_block.erase("empirical_survival"); // lives in empirical.csv
            if (redundant_sim) {
                json wk = json::parse(sim_report_json(redundant_sim->wk));
                wk.erase("empirical_survival");
                simulation_block["wk"] = std::move(wk);
            }
        }
    }

    // Comparison ---------------------------------------------------------------
    if (wants(scenario, OutputKind::compare)) {
        ComparisonRows rows;
        switch (scenario.target) {
            case Target::random_sum: {
                AnalyticSummary a;
                a.mean = mean_random_sum(*law_moments);
                a.variance = variance_random_sum(*law_moments);
                a.survival = survival;
                const ComparisonVerdict v = compare_reports(*primary_report, a);
                rows.add_z("mean_S", primary_report->mean, a.mean,
                           primary_report->std_err_mean);
                rows.add_z("var_S", primary_report->variance, *a.variance,
                           primary_report->std_err_variance);
                if (v.ks) rows.add_ks("survival_ks", *v.ks);
                break;
            }
            case Target::geiger: {
                rows.add_z("mean_T", primary_report->mean, geiger_chars->mean_T,
                           primary_report->std_err_mean);
                rows.add_z("var_T", primary_report->variance, geiger_chars->var_T,
                           primary_report->std_err_variance);
                rows.add_ks("survival_ks",
                            ks_test(primary_report->samples,
                                    [&](double t) { return survival->cdf(t); }, 0.01));
                break;
            }
            case Target::redundant: {
                const RedundantCharacteristics& c = *redundant_chars;
                rows.add_z("mean_W1", redundant_sim->w1.mean, c.mean_w1,
                           redundant_sim->w1.std_err_mean);
                rows.add_z("var_W1", redundant_sim->w1.variance, c.var_w1,
                           redundant_sim->w1.std_err_variance);
                rows.add_z("mean_Wk", redundant_sim->wk.mean, c.mean_wk,
                           redundant_sim->wk.std_err_mean);
                rows.add_z("var_Wk", redundant_sim->wk.variance, c.var_wk,
                           redundant_sim->wk.std_err_variance);
                rows.add_ks("alpha0_ks", ks_test(redundant_sim->alpha0,
                                                 [&](double t) { return c.alpha0_survival.cdf(t); },
                                                 0.01));
                rows.add_ks("alpha1_ks", ks_test(redundant_sim->alpha1,
                                                 [&](double t) { return c.alpha1_survival.cdf(t); },
                                                 0.01));
                if (survival)
                    rows.add_ks("w1_survival_ks",
                                ks_test(redundant_sim->w1.samples,
                                        [&](double t) { return survival->cdf(t); }, 0.01));
                break;
            }
            case Target::ssqs: {
                const SsqsCharacteristics& c = *ssqs_chars;
                const auto& xs = primary_report->extra_scalars;
                rows.add_z("mean_T", primary_report->mean, c.mean_T,
                           primary_report->std_err_mean);
                rows.add_z("mean_alpha", xs.at("mean_alpha"), c.mean_alpha,
                           xs.at("std_err_mean_alpha"));
                rows.add_z("mean_beta", xs.at("mean_beta"), c.mean_beta,
                           xs.at("std_err_mean_beta"));
                rows.add_z("mean_alpha0", xs.at("mean_alpha0"), c.mean_alpha0,
                           xs.at("std_err_mean_alpha0"));
                rows.add_z("mean_alpha1", xs.at("mean_alpha1"), c.mean_alpha1,
                           xs.at("std_err_mean_alpha1"));
                rows.add_z("p_alpha0_zero", xs.at("p_alpha0_zero"), c.q,
                           xs.at("std_err_p_alpha0_zero"));
                rows.add_abs("frac_time_state0", xs.at("frac_time_state0"), c.p0, 0.01);
                rows.add_abs("frac_time_state1", xs.at("frac_time_state1"), c.p1, 0.01);
                rows.add_ks("alpha1_ks", ks_test(ssqs_sim->alpha1,
                                                 [&](double t) { return c.alpha1_law.cdf(t); },
                                                 0.01));
                break;
            }
        }
        json comparison{{"verdict", rows.all_pass ? "PASS" : "FAIL"},
                        {"checks", std::move(rows.rows)}};
        write_text_file(dir / "comparison.json", comparison.dump(2) + "\n", result);
        if (!rows.all_pass) {
            result.exit_code = 2;
            result.message = "comparison FAILED; see comparison.json";
        }
    }

    // Summary -------------------------------------------------------------------
    json summary{{"scenario", scenario.name},
                 {"symbols", std::move(symbols)},
                 {"provenance",
                  {{"seed", sim.seed},
                   {"grid", {{"t_max", grid.t_max}, {"h", grid.h}}},
                   {"version", kVersion}}}};
    if (!simulation_block.is_null()) summary["simulation"] = std::move(simulation_block);
    if (!scenario.warnings.empty()) summary["warnings"] = scenario.warnings;
    write_text_file(dir / "summary.json", summary.dump(2) + "\n", result);

    if (result.message.empty()) result.message = "ok";
    return result;
}

} // namespace randsum
