#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "randsum/analytic.hpp"
#include "randsum/volterra.hpp"

using namespace randsum;

namespace {
using SD = ScalarDistribution;

double sup_vs_exponential(const SurvivalCurve& c, double rate) {
    double worst = 0.0;
    for (std::size_t i = 0; i < c.values.size(); ++i)
        worst = std::max(worst, std::abs(c.values[i] - std::exp(-rate * c.h * static_cast<double>(i))));
    return worst;
}

} // namespace

TEST_CASE("curve interpolation, integral and csv round trip") {
    SurvivalCurve c;
    c.h = 0.5;
    c.values = {1.0, 0.5, 0.25, 0.125};
    CHECK(c.at(0.25) == doctest::Approx(0.75));
    CHECK(c.at(5.0) == doctest::Approx(0.125));
    CHECK(c.cdf(0.5) == doctest::Approx(0.5));
    CHECK(c.integral() == doctest::Approx(0.5 * (0.75 + 0.375 + 0.1875)));

    std::stringstream ss;
    c.write_csv(ss);
    const SurvivalCurve back = SurvivalCurve::read_csv(ss);
    CHECK(back.h == doctest::Approx(c.h));
    REQUIRE(back.values.size() == c.values.size());
    for (std::size_t i = 0; i < c.values.size(); ++i)
        CHECK(back.values[i] == doctest::Approx(c.values[i]).epsilon(1e-11));
}

TEST_CASE("solver reproduces the exact exponential survivals") {
    // Threshold coupling with an exponential gap: survival e^{-t} whatever
    // the threshold law.
    const auto min_ee = JointStepLaw::min_threshold(SD::exponential(1.0), SD::exponential(2.0));
    CHECK(sup_vs_exponential(solve_survival(min_ee, 10.0, 0.01), 1.0) <= 5e-4);

    // Independent exponential steps: survival e^{-lambda q t}.
    const auto ind = JointStepLaw::independent(SD::exponential(2.0), 0.5);
    CHECK(sup_vs_exponential(solve_survival(ind, 10.0, 0.01), 1.0) <= 5e-4);
}

TEST_CASE("solved curve integrates to the mean") {
    const auto race = JointStepLaw::race_step(SD::exponential(1.0), SD::exponential(1.0));
    const SurvivalCurve curve = solve_survival(race, 40.0, 0.01);
    const double mean = mean_random_sum(race.moments()); // 1/(lambda q) = 2
    CHECK(mean == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(curve.integral() == doctest::Approx(mean).epsilon(1e-2));
}

TEST_CASE("second-order self-convergence under grid refinement") {
    const auto law = JointStepLaw::min_threshold(SD::exponential(1.0), SD::exponential(2.0));
    const double e1 = sup_vs_exponential(solve_survival(law, 8.0, 0.08), 1.0);
    const double e2 = sup_vs_exponential(solve_survival(law, 8.0, 0.04), 1.0);
    const double e3 = sup_vs_exponential(solve_survival(law, 8.0, 0.02), 1.0);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.5));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.5));
}

TEST_CASE("solved curve satisfies the equation it came from") {
    const auto law = JointStepLaw::race_step(SD::exponential(1.0), SD::exponential(2.0));
    const SurvivalCurve curve = solve_survival(law, 10.0, 0.01);
    CHECK(volterra_residual(law, curve) <= 1e-3);
}

TEST_CASE("kernel atoms snap to nodes without losing mass") {
    // Fixed threshold: single kernel atom at t = 1; still exactly e^{-t}.
    const auto law = JointStepLaw::min_threshold(SD::exponential(1.0), SD::deterministic(1.0));
    CHECK(sup_vs_exponential(solve_survival(law, 10.0, 0.01), 1.0) <= 2e-2);
    // Atom off the grid: mass moves at most h/2, first-order error only.
    const auto off = JointStepLaw::min_threshold(SD::exponential(1.0), SD::deterministic(1.003));
    CHECK(sup_vs_exponential(solve_survival(off, 10.0, 0.01), 1.0) <= 2e-2);
}

TEST_CASE("kernel mass at zero moves into the diagonal") {
    // P(zeta = 0) = 0.72: the kernel has a large atom at the origin, which
    // the recursion must absorb implicitly.
    const auto zeta = SD::tabulated({0.0, 1.0}, {0.8, 1.0});
    const auto law = JointStepLaw::independent(zeta, 0.1);
    const SurvivalCurve curve = solve_survival(law, 10.0, 0.01);
    CHECK(curve.values.front() == 1.0);
    for (std::size_t i = 1; i < curve.values.size(); ++i)
        CHECK(curve.values[i] <= curve.values[i - 1] + 1e-12);
    CHECK(volterra_residual(law, curve) <= 1e-3);
}

TEST_CASE("solver input validation") {
    const auto law = JointStepLaw::independent(SD::exponential(1.0), 0.5);
    CHECK_THROWS_AS(solve_survival(law, 10.0, 0.0), ValidationError);
    CHECK_THROWS_AS(solve_survival(law, 0.05, 0.01), ValidationError);
}

TEST_CASE("inversion of the exponential transform pair") {
    // CDF transform of the unit-rate exponential law, analytic in long double.
    auto transform = [](long double z) { return 1.0L / (z * (z + 1.0L)); };
    double worst = 0.0;
    for (double t = 0.1; t <= 10.0; t += 0.01) {
        const double f = gaver_stehfest_ld(transform, t, 22);
        worst = std::max(worst, std::abs(f - (1.0 - std::exp(-t))));
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("inversion of a point mass at zero") {
    // phi = 1 means the sum is 0 almost surely: its CDF is 1 for t > 0.
    LaplaceTransforms lt;
    lt.psi = [](double) { return 1.0; };
    lt.psi0 = [](double) { return 0.0; };
    const std::vector<double> grid{0.5, 1.0, 3.0};
    const std::vector<double> survival = invert_laplace(lt, grid);
    for (double s : survival) CHECK(s == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("inversion agrees with the marching solver on a counter law") {
    const auto law = JointStepLaw::race_step(SD::exponential(1.0), SD::exponential(2.0));
    const SurvivalCurve solved = solve_survival(law, 10.0, 0.01);
    const SurvivalCurve inverted = invert_laplace_curve(laplace_transforms(law), 10.0, 0.01);
    double worst = 0.0;
    for (std::size_t i = 10; i < solved.values.size(); ++i) // from t = 0.1
        worst = std::max(worst, std::abs(solved.values[i] - inverted.values[i]));
    CHECK(worst <= 1e-3);
}

TEST_CASE("inversion agrees with the marching solver on a busy-period law") {
    const auto law =
        JointStepLaw::shifted_min(SD::exponential(1.0), SD::exponential(2.0), SD::exponential(1.5));
    const SurvivalCurve solved = solve_survival(law, 10.0, 0.05);
    const SurvivalCurve inverted = invert_laplace_curve(laplace_transforms(law), 10.0, 0.05);
    double worst = 0.0;
    for (std::size_t i = 2; i < solved.values.size(); ++i) // from t = 0.1
        worst = std::max(worst, std::abs(solved.values[i] - inverted.values[i]));
    CHECK(worst <= 2e-3);
}

TEST_CASE("discontinuous targets trip the stability gate") {
    // A unit atom at t = 1: the transform is e^{-z}, whose inversion
    // oscillates around the jump.
    LaplaceTransforms lt;
    lt.psi = [](double z) { return std::exp(-z); };
    lt.psi0 = [](double) { return 0.0; };
    const std::vector<double> grid{0.8, 0.9, 1.0, 1.1, 1.2};
    CHECK_THROWS_AS(invert_laplace(lt, grid), InversionUnstable);
}

TEST_CASE("stehfest order bounds") {
    auto tf = [](double z) { return 1.0 / (z + 1.0); };
    CHECK_THROWS_AS(gaver_stehfest(tf, 1.0, 7), ValidationError);
    CHECK_THROWS_AS(gaver_stehfest(tf, 1.0, 24), ValidationError);
    CHECK_THROWS_AS(gaver_stehfest(tf, 0.0, 12), ValidationError);
}
