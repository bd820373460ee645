#include <doctest.h>

#include <cmath>

#include "randsum/analytic.hpp"
#include "randsum/models.hpp"

using namespace randsum;

namespace {
using SD = ScalarDistribution;
}

TEST_CASE("counter with a fixed lock time: frozen characteristics") {
    // lambda = 1, lock = log 2: q = P(tau < log 2) = 1/2, mean = 1/(lambda q) = 2,
    // variance = 4 (1 + log 2) via a0 = (1 + log 2)/2 (integration by parts).
    const GeigerModel m{1.0, SD::deterministic(std::log(2.0))};
    const GeigerCharacteristics c = geiger_characteristics(m, 12.0, 0.01);
    CHECK(c.q == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.mean_T == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.var_T == doctest::Approx(4.0 * (1.0 + std::log(2.0))).epsilon(1e-9));
    CHECK(c.survival.values.front() == 1.0);
    CHECK(c.survival.integral() <= c.mean_T); // truncated tail
}

TEST_CASE("counter survival curve integrates to the mean") {
    const GeigerModel m{1.0, SD::deterministic(std::log(2.0))};
    const GeigerCharacteristics c = geiger_characteristics(m, 30.0, 0.01);
    CHECK(c.survival.integral() == doctest::Approx(c.mean_T).epsilon(0.01));
}

TEST_CASE("counter variance formula equals the generic moment route") {
    struct Case {
        double lambda;
        SD lock;
    };
    const Case cases[] = {
        {1.0, SD::exponential(2.0)},
        {0.5, SD::uniform(0.0, 3.0)},
        {2.0, SD::erlang(2, 1.0)},
        {1.3, SD::deterministic(0.8)},
    };
    for (const Case& cs : cases) {
        const GeigerModel m{cs.lambda, cs.lock};
        const GeigerCharacteristics c = geiger_characteristics(m, 10.0, 0.05);
        const StepMoments sm = m.step_law().moments();
        CHECK(c.mean_T == doctest::Approx(mean_random_sum(sm)).epsilon(1e-9));
        CHECK(c.var_T == doctest::Approx(variance_random_sum(sm)).epsilon(1e-8));
    }
}

TEST_CASE("counter degenerate boundary") {
    // Instant unlock: every arrival is registered, no loss ever.
    CHECK_THROWS_AS(geiger_characteristics(GeigerModel{1.0, SD::deterministic(0.0)}, 10.0, 0.01),
                    DegenerateLaw);
}

TEST_CASE("redundant pair: frozen characteristics") {
    // lambda = 1, lambda' = 0.5, repair Exp(2): q = 1/3,
    // mean W1 = 1 + 1/(1.5/3) = 3, mean Wk = (1 + 1/6)/(1.5/3) / ... = 7/3,
    // var W1 = 23/3 (sigma2 = 5/9, a = 1, a0 = 2/3 through the formula),
    // var Wk = var W1 - 1/1.5^2 = 65/9.
    const RedundantModel m{1.0, 0.5, SD::exponential(2.0)};
    const RedundantCharacteristics c = redundant_characteristics(m);
    CHECK(c.q == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(c.mean_w1 == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(c.mean_wk == doctest::Approx(7.0 / 3.0).epsilon(1e-12));
    CHECK(c.var_w1 == doctest::Approx(23.0 / 3.0).epsilon(1e-9));
    CHECK(c.var_wk == doctest::Approx(65.0 / 9.0).epsilon(1e-9));
    CHECK(c.alpha0_survival.rate == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.alpha1_survival.rate == doctest::Approx(1.0));
    CHECK(c.alpha0_survival(1.0) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("redundant characteristics equal the stopped-sum route") {
    struct Case {
        double lambda, lambda_prime;
        SD repair;
    };
    const Case cases[] = {
        {1.0, 0.5, SD::exponential(2.0)},
        {0.7, 0.0, SD::uniform(0.0, 2.0)},
        {2.0, 1.0, SD::erlang(2, 3.0)},
        {1.0, 0.25, SD::deterministic(0.5)},
    };
    for (const Case& cs : cases) {
        const RedundantModel m{cs.lambda, cs.lambda_prime, cs.repair};
        const RedundantCharacteristics c = redundant_characteristics(m);
        const StepMoments sm = m.busy_period_law().moments();
        // Same mean through the busy-period representation.
        CHECK(c.mean_w1 == doctest::Approx(mean_random_sum(sm)).epsilon(1e-8));
        // Same variance: the characteristics use their own integrals.
        CHECK(c.var_w1 == doctest::Approx(variance_random_sum(sm)).epsilon(1e-7));
        CHECK(c.var_wk == doctest::Approx(c.var_w1 - 1.0 / std::pow(cs.lambda + cs.lambda_prime, 2))
                              .epsilon(1e-12));
    }
}

TEST_CASE("queue characteristics: frozen values and identities") {
    const SsqsModel m{1.0, SD::exponential(2.0)};
    const SsqsCharacteristics c = ssqs_characteristics(m);
    CHECK(c.q == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(c.b == doctest::Approx(0.5));
    CHECK(c.rho == doctest::Approx(0.5));
    CHECK(c.p0 == doctest::Approx(0.5));
    CHECK(c.p1 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(c.mean_alpha0 == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.mean_alpha1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.mean_alpha == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(c.mean_T == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(c.mean_beta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.alpha0_law.atom_mass == doctest::Approx(1.0 / 3.0));
    CHECK(c.alpha0_law.tail_rate == doctest::Approx(1.0 / 3.0));
    CHECK(c.alpha0_law.survival(0.0) == doctest::Approx(2.0 / 3.0));
    CHECK(c.alpha1_law.rate == doctest::Approx(1.0));

    // Birth-death cross-check for the exponential-service instance.
    CHECK(c.p1 == doctest::Approx((1.0 - c.rho) * c.rho).epsilon(1e-12));
}

TEST_CASE("queue identities over a family of stable models") {
    struct Case {
        double lambda;
        SD service;
    };
    const Case cases[] = {
        {1.0, SD::exponential(2.0)},
        {0.5, SD::uniform(0.0, 1.5)},
        {0.8, SD::erlang(2, 4.0)},
        {1.0, SD::deterministic(0.6)},
    };
    for (const Case& cs : cases) {
        const SsqsCharacteristics c = ssqs_characteristics(SsqsModel{cs.lambda, cs.service});
        CHECK(c.mean_alpha0 + c.mean_alpha1 == doctest::Approx(c.mean_alpha).epsilon(1e-12));
        CHECK(c.mean_alpha + c.mean_beta == doctest::Approx(c.mean_T).epsilon(1e-12));
        CHECK(c.p0 + c.p1 <= 1.0 + 1e-12);
        CHECK(c.mean_beta >= -1e-12); // rho >= q always
        CHECK(c.p0 == doctest::Approx(c.mean_alpha0 / c.mean_T).epsilon(1e-12));
        CHECK(c.p1 == doctest::Approx(c.mean_alpha1 / c.mean_T).epsilon(1e-12));
    }
}

TEST_CASE("queue stability guard") {
    CHECK_THROWS_AS(ssqs_characteristics(SsqsModel{1.0, SD::exponential(0.5)}),
                    StabilityViolation);
    CHECK_THROWS_AS(ssqs_characteristics(SsqsModel{2.0, SD::deterministic(0.5)}),
                    StabilityViolation);
}
