#include "randsum/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "randsum/analytic.hpp"
#include "randsum/models.hpp"
#include "randsum/simulate.hpp"
#include "randsum/stats.hpp"
#include "randsum/volterra.hpp"

namespace randsum {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

double sup_vs_exponential(const SurvivalCurve& c, double rate) {
    double worst = 0.0;
    for (std::size_t i = 0; i < c.values.size(); ++i) {
        const double t = c.t0 + c.h * static_cast<double>(i);
        worst = std::max(worst, std::abs(c.values[i] - std::exp(-rate * t)));
    }
    return worst;
}

struct Checker {
    std::vector<CheckResult> results;

    void add(const std::string& id, bool pass, const std::string& detail) {
        results.push_back({id, pass, detail});
    }
};

// --- exact survival of the min-threshold coupling -------------------------

void check_min_threshold_survival(Checker& out) {
    struct Case {
        const char* name;
        ScalarDistribution eta;
        double tol;
    };
    const Case cases[] = {
        {"exp", ScalarDistribution::exponential(2.0), 5e-4},
        {"det", ScalarDistribution::deterministic(1.0), 2e-2},
        {"uniform", ScalarDistribution::uniform(0.0, 2.0), 5e-4},
    };
    bool pass = true;
    std::string detail;
    for (const Case& c : cases) {
        const JointStepLaw law =
            JointStepLaw::min_threshold(ScalarDistribution::exponential(1.0), c.eta);
        const SurvivalCurve curve = solve_survival(law, 10.0, 0.01);
        const double err = sup_vs_exponential(curve, 1.0);
        pass = pass && err <= c.tol;
        detail += std::string(c.name) + "=" + fmt(err) + "(tol " + fmt(c.tol) + ") ";
    }
    out.add("min_threshold_survival_exact", pass, detail);
}

// --- four agreeing routes for the independent exponential law -------------

void check_independent_exponential_pipeline(Checker& out, std::uint64_t n, std::uint64_t seed) {
    const double lambda = 2.0, q = 0.5, rate = lambda * q;
    const JointStepLaw law = JointStepLaw::independent(ScalarDistribution::exponential(lambda), q);

    const auto closed = closed_form_survival(law);
    const bool closed_ok = closed && std::abs(closed->rate - rate) <= 1e-12;

    const SurvivalCurve volterra = solve_survival(law, 10.0, 0.01);
    const SurvivalCurve inverted = invert_laplace_curve(laplace_transforms(law), 10.0, 0.01);

    double volterra_err = 0.0, inversion_err = 0.0, route_gap = 0.0;
    for (std::size_t i = 0; i < volterra.values.size(); ++i) {
        const double t = 0.01 * static_cast<double>(i);
        const double exact = std::exp(-rate * t);
        volterra_err = std::max(volterra_err, std::abs(volterra.values[i] - exact));
        if (t >= 0.1) { // inversion is evaluated away from 0
            inversion_err = std::max(inversion_err, std::abs(inverted.values[i] - exact));
            route_gap = std::max(route_gap, std::abs(inverted.values[i] - volterra.values[i]));
        }
    }

    const RandomSumSimResult sim = simulate_random_sum(law, n, seed);
    const KsResult ks =
        ks_test(sim.report.samples, [rate](double t) { return t < 0.0 ? 0.0 : -std::expm1(-rate * t); });

    const bool pass = closed_ok && volterra_err <= 2e-3 && inversion_err <= 2e-3 &&
                      route_gap <= 2e-3 && ks.pass;
    out.add("independent_exponential_pipeline", pass,
            "volterra=" + fmt(volterra_err) + " inversion=" + fmt(inversion_err) +
                " gap=" + fmt(route_gap) + " ks=" + fmt(ks.statistic) + "/" + fmt(ks.critical));
}

// --- mean/variance formulas across all couplings ---------------------------

std::vector<std::pair<std::string, JointStepLaw>> moment_test_laws() {
    using SD = ScalarDistribution;
    std::vector<std::pair<std::string, JointStepLaw>> laws;
    laws.emplace_back("ind_exp", JointStepLaw::independent(SD::exponential(1.0), 0.5));
    laws.emplace_back("ind_erl", JointStepLaw::independent(SD::erlang(3, 2.0), 0.2));
    laws.emplace_back("ind_unif", JointStepLaw::independent(SD::uniform(0.0, 2.0), 0.8));
    laws.emplace_back("min_ee", JointStepLaw::min_threshold(SD::exponential(1.0), SD::exponential(2.0)));
    laws.emplace_back("min_eu", JointStepLaw::min_threshold(SD::exponential(2.0), SD::uniform(0.0, 1.0)));
    laws.emplace_back("min_ue", JointStepLaw::min_threshold(SD::uniform(0.0, 2.0), SD::exponential(1.0)));
    laws.emplace_back("race_ee", JointStepLaw::race_step(SD::exponential(1.0), SD::exponential(1.0)));
    laws.emplace_back("race_ed", JointStepLaw::race_step(SD::exponential(1.0), SD::deterministic(std::log(2.0))));
    laws.emplace_back("race_eu", JointStepLaw::race_step(SD::exponential(2.0), SD::uniform(0.0, 2.0)));
    laws.emplace_back("shift_eee", JointStepLaw::shifted_min(SD::exponential(1.0), SD::exponential(2.0), SD::exponential(1.5)));
    laws.emplace_back("shift_eud", JointStepLaw::shifted_min(SD::exponential(1.0), SD::uniform(0.0, 2.0), SD::deterministic(0.3)));
    laws.emplace_back("shift_ege", JointStepLaw::shifted_min(SD::exponential(2.0), SD::erlang(2, 3.0), SD::exponential(1.0)));
    return laws;
}

void check_moment_formulas(Checker& out, std::uint64_t n, std::uint64_t n_large,
                           std::uint64_t seed) {
    bool pass = true;
    double worst_z = 0.0;
    std::string offender = "none";
    std::uint64_t law_index = 0;
    for (const auto& [name, law] : moment_test_laws()) {
        const StepMoments m = law.moments();
        AnalyticSummary a;
        a.mean = mean_random_sum(m);
        a.variance = variance_random_sum(m);
        SimOptions opts;
        opts.keep_samples = false;
        const RandomSumSimResult sim = simulate_random_sum(law, n, seed + 101 + law_index, opts);
        const ComparisonVerdict v = compare_reports(sim.report, a);
        const double z = std::max(std::abs(v.z_mean), std::abs(*v.z_variance));
        if (z > worst_z) {
            worst_z = z;
            offender = name;
        }
        pass = pass && v.pass;
        ++law_index;
    }

    // Dependent steps: the correct variance formula passes while the
    // independent-stop shortcut is rejected by a wide margin.
    const JointStepLaw race =
        JointStepLaw::race_step(ScalarDistribution::exponential(1.0), ScalarDistribution::exponential(1.0));
    const StepMoments rm = race.moments();
    SimOptions big;
    big.keep_samples = false;
    const RandomSumSimResult sim = simulate_random_sum(race, n_large, seed + 997, big);
    const double se = sim.report.std_err_variance;
    const double z_exact = (sim.report.variance - variance_random_sum(rm)) / se;
    const double z_naive =
        (sim.report.variance - variance_independent_stop(rm.a, rm.sigma2, rm.q)) / se;
    const bool discriminates = std::abs(z_exact) <= 4.0 && std::abs(z_naive) > 10.0;
    pass = pass && discriminates;

    out.add("moment_formulas_all_couplings", pass,
            "worst|z|=" + fmt(worst_z) + "@" + offender + " dependent: z_exact=" + fmt(z_exact) +
                " z_naive=" + fmt(z_naive));
}

// --- algebraic reduction of the variance formula ---------------------------

void check_independence_reduction(Checker& out, std::uint64_t seed) {
    Rng rng(seed + 4);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = 0.05 + 3.0 * rng.uniform01();
        const double sigma2 = 0.01 + 2.0 * rng.uniform01();
        const double q = 0.01 + 0.98 * rng.uniform01();
        StepMoments m{a, sigma2, (1.0 - q) * a, q};
        const double lhs = variance_random_sum(m);
        const double rhs = variance_independent_stop(a, sigma2, q);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1e-300, std::abs(rhs)));
    }
    out.add("independence_reduction_identity", worst <= 1e-12, "max_rel=" + fmt(worst));
}

// --- scaled small-q limit ---------------------------------------------------

void check_small_q_limit(Checker& out, std::uint64_t seed) {
    std::vector<double> z_grid;
    for (int i = 1; i <= 200; ++i) z_grid.push_back(0.05 * i);
    const double qs[] = {0.5, 0.05, 0.005, 0.0005};
    bool pass = true;
    double prev = 0.0;
    std::string detail = "sup_err:";
    for (std::size_t i = 0; i < 4; ++i) {
        const JointStepLaw law =
            JointStepLaw::independent(ScalarDistribution::exponential(1.0), qs[i]);
        const double err = scaled_limit_diagnostics(law, z_grid).sup_error;
        detail += " " + fmt(err);
        if (i > 0 && err > prev + 1e-12) pass = false;
        prev = err;
    }
    pass = pass && prev < 1e-2;

    // The rescaled sample itself: q S has the unit-rate limit law.
    const double q = 0.005;
    const JointStepLaw law = JointStepLaw::independent(ScalarDistribution::exponential(1.0), q);
    SimOptions opts;
    opts.curve_t_max = 50.0 / q;
    opts.curve_h = 0.05 / q;
    const RandomSumSimResult sim = simulate_random_sum(law, 100'000, seed + 5, opts);
    std::vector<double> scaled = sim.report.samples;
    for (double& s : scaled) s *= q;
    const KsResult ks = ks_test(std::move(scaled),
                                [](double t) { return t < 0.0 ? 0.0 : -std::expm1(-t); });
    pass = pass && ks.pass;
    out.add("small_q_exponential_limit", pass,
            detail + " ks=" + fmt(ks.statistic) + "/" + fmt(ks.critical));
}

// --- counter model ----------------------------------------------------------

void check_geiger(Checker& out, std::uint64_t n, std::uint64_t seed) {
    const GeigerModel model{1.0, ScalarDistribution::deterministic(std::log(2.0))};
    const GeigerCharacteristics c = geiger_characteristics(model, 30.0, 0.01);
    const double mean_exact = 2.0;
    const double var_exact = 4.0 * (1.0 + std::log(2.0));
    bool pass = std::abs(c.mean_T - mean_exact) <= 1e-9 && std::abs(c.var_T - var_exact) <= 1e-9;

    const SimReport sim = simulate_geiger(model, n, seed + 6);
    const double z_mean = (sim.mean - c.mean_T) / sim.std_err_mean;
    const double z_var = (sim.variance - c.var_T) / sim.std_err_variance;
    const KsResult ks =
        ks_test(sim.samples, [&c](double t) { return c.survival.cdf(t); });
    pass = pass && std::abs(z_mean) <= 4.0 && std::abs(z_var) <= 4.0 && ks.pass;
    out.add("geiger_counter_model", pass,
            "z_mean=" + fmt(z_mean) + " z_var=" + fmt(z_var) + " ks=" + fmt(ks.statistic) + "/" +
                fmt(ks.critical));
}

// --- redundant repairable pair ----------------------------------------------

void check_redundant(Checker& out, std::uint64_t n, std::uint64_t seed) {
    const RedundantModel model{1.0, 0.5, ScalarDistribution::exponential(2.0)};
    const RedundantCharacteristics c = redundant_characteristics(model);
    bool pass = std::abs(c.mean_w1 - 3.0) <= 1e-9 && std::abs(c.mean_wk - 7.0 / 3.0) <= 1e-9;

    const RedundantSimResult sim = simulate_redundant(model, n, seed + 7);
    const double z_w1 = (sim.w1.mean - c.mean_w1) / sim.w1.std_err_mean;
    const double z_wk = (sim.wk.mean - c.mean_wk) / sim.wk.std_err_mean;
    const double lam_sum = model.lambda + model.lambda_prime;
    const double shift_var = 1.0 / (lam_sum * lam_sum);
    const double rel = sim.wk.variance - (sim.w1.variance - shift_var);
    const double rel_se = std::sqrt(sim.w1.std_err_variance * sim.w1.std_err_variance +
                                    sim.wk.std_err_variance * sim.wk.std_err_variance);
    const double z_rel = rel / rel_se;
    const KsResult ks1 =
        ks_test(sim.alpha1, [&c](double t) { return c.alpha1_survival.cdf(t); });
    const KsResult ks0 =
        ks_test(sim.alpha0, [&c](double t) { return c.alpha0_survival.cdf(t); });
    pass = pass && std::abs(z_w1) <= 4.0 && std::abs(z_wk) <= 4.0 && std::abs(z_rel) <= 4.0 &&
           ks1.pass && ks0.pass;
    out.add("redundant_system_model", pass,
            "z_w1=" + fmt(z_w1) + " z_wk=" + fmt(z_wk) + " z_varrel=" + fmt(z_rel) +
                " ks_a1=" + fmt(ks1.statistic) + " ks_a0=" + fmt(ks0.statistic));
}

// --- queue regeneration cycles ------------------------------------------------

void check_ssqs(Checker& out, std::uint64_t n, std::uint64_t seed) {
    const SsqsModel model{1.0, ScalarDistribution::exponential(2.0)};
    const SsqsCharacteristics c = ssqs_characteristics(model);
    // Cross-check against the classical birth-death stationary law.
    const double p1_birth_death = (1.0 - c.rho) * c.rho;
    bool pass = std::abs(c.p1 - p1_birth_death) <= 1e-12;

    const SsqsSimResult sim = simulate_ssqs(model, n, seed + 8);
    const auto& xs = sim.cycle.extra_scalars;
    auto z_of = [&xs](const char* what, double target) {
        return (xs.at(std::string("mean_") + what) - target) /
               xs.at(std::string("std_err_mean_") + what);
    };
    const double z_T = (sim.cycle.mean - c.mean_T) / sim.cycle.std_err_mean;
    const double z_alpha = z_of("alpha", c.mean_alpha);
    const double z_beta = z_of("beta", c.mean_beta);
    const double z_a0 = z_of("alpha0", c.mean_alpha0);
    const double z_a1 = z_of("alpha1", c.mean_alpha1);
    const double z_atom =
        (xs.at("p_alpha0_zero") - c.q) / xs.at("std_err_p_alpha0_zero");
    const double d0 = std::abs(xs.at("frac_time_state0") - c.p0);
    const double d1 = std::abs(xs.at("frac_time_state1") - c.p1);
    for (double z : {z_T, z_alpha, z_beta, z_a0, z_a1, z_atom})
        pass = pass && std::abs(z) <= 4.0;
    pass = pass && d0 <= 0.01 && d1 <= 0.01;
    const KsResult ks1 = ks_test(sim.alpha1, [&c](double t) { return c.alpha1_law.cdf(t); });
    pass = pass && ks1.pass;
    out.add("queue_regeneration_model", pass,
            "z_T=" + fmt(z_T) + " z_alpha=" + fmt(z_alpha) + " z_beta=" + fmt(z_beta) +
                " z_atom=" + fmt(z_atom) + " |p0_err|=" + fmt(d0) + " |p1_err|=" + fmt(d1) +
                " ks_a1=" + fmt(ks1.statistic));
}

// --- direct residual of the integral equation ----------------------------------

void check_volterra_residual(Checker& out) {
    using SD = ScalarDistribution;
    struct Case {
        const char* name;
        JointStepLaw law;
        double tol;
    };
    const Case cases[] = {
        {"min_exp", JointStepLaw::min_threshold(SD::exponential(1.0), SD::exponential(2.0)), 1e-3},
        {"min_det", JointStepLaw::min_threshold(SD::exponential(1.0), SD::deterministic(1.0)), 4e-2},
        {"min_unif", JointStepLaw::min_threshold(SD::exponential(1.0), SD::uniform(0.0, 2.0)), 1e-3},
        {"ind_exp", JointStepLaw::independent(SD::exponential(2.0), 0.5), 1e-3},
        {"race_det", JointStepLaw::race_step(SD::exponential(1.0), SD::deterministic(std::log(2.0))), 1e-3},
    };
    bool pass = true;
    std::string detail;
    for (const Case& c : cases) {
        const SurvivalCurve curve = solve_survival(c.law, 10.0, 0.01);
        const double r = volterra_residual(c.law, curve);
        pass = pass && r <= c.tol;
        detail += std::string(c.name) + "=" + fmt(r) + " ";
    }
    out.add("volterra_residual", pass, detail);
}

void check_determinism(Checker& out, std::uint64_t seed) {
    SelftestConfig mini;
    mini.n_standard = 10'000;
    mini.n_large = 20'000;
    mini.seed = seed;
    mini.include_determinism = false;
    const std::string a = render_report(run_acceptance_checks(mini));
    const std::string b = render_report(run_acceptance_checks(mini));
    out.add("determinism", a == b,
            a == b ? "two runs byte-identical" : "reports differ between runs");
}

} // namespace

std::vector<CheckResult> run_acceptance_checks(const SelftestConfig& config) {
    Checker out;
    check_min_threshold_survival(out);
    check_independent_exponential_pipeline(out, config.n_standard, config.seed + 2);
    check_moment_formulas(out, config.n_standard, config.n_large, config.seed);
    check_independence_reduction(out, config.seed);
    check_small_q_limit(out, config.seed);
    check_geiger(out, config.n_standard, config.seed);
    check_redundant(out, config.n_standard, config.seed);
    check_ssqs(out, config.n_standard, config.seed);
    check_volterra_residual(out);
    if (config.include_determinism) check_determinism(out, config.seed);
    return out.results;
}

std::string render_report(const std::vector<CheckResult>& results) {
    std::ostringstream os;
    os << "check                                 result  detail\n";
    std::size_t passed = 0;
    for (const CheckResult& r : results) {
        std::string id = r.id;
        if (id.size() < 36) id.append(36 - id.size(), ' ');
        os << id << "  " << (r.pass ? "PASS" : "FAIL") << "    " << r.detail << "\n";
        if (r.pass) ++passed;
    }
    os << "overall: " << (passed == results.size() ? "PASS" : "FAIL") << " (" << passed << "/"
       << results.size() << ")\n";
    return os.str();
}

int selftest(std::ostream& os, std::uint64_t seed) {
    SelftestConfig config;
    config.n_standard = 100'000;
    config.n_large = 1'000'000;
    config.seed = seed;
    const std::vector<CheckResult> results = run_acceptance_checks(config);
    os << render_report(results);
    for (const CheckResult& r : results)
        if (!r.pass) return 1;
    return 0;
}

} // namespace randsum
