#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "randsum/scalar_distribution.hpp"

using randsum::NonfiniteMoment;
using randsum::Rng;
using randsum::ScalarDistribution;
using randsum::ValidationError;

namespace {

// Plain Simpson rule, used as an independent oracle for transforms/moments.
double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("exponential closed forms") {
    const auto d = ScalarDistribution::exponential(2.0);
    CHECK(d.cdf(0.0) == doctest::Approx(0.0));
    CHECK(d.cdf(1.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-14));
    CHECK(d.mean() == doctest::Approx(0.5));
    CHECK(d.variance() == doctest::Approx(0.25));
    CHECK(d.laplace(3.0) == doctest::Approx(2.0 / 5.0));
    CHECK(d.quantile(d.cdf(0.7)) == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(d.survival(d.tail_cutoff()) <= 1.1e-18);
}

TEST_CASE("erlang against the series oracle") {
    const auto d = ScalarDistribution::erlang(3, 2.0);
    CHECK(d.mean() == doctest::Approx(1.5));
    CHECK(d.variance() == doctest::Approx(0.75));
    // P(X <= t) = 1 - exp(-rt) (1 + rt + (rt)^2/2) for shape 3
    const double t = 1.0, rt = 2.0;
    const double series = 1.0 - std::exp(-rt) * (1.0 + rt + rt * rt / 2.0);
    CHECK(d.cdf(t) == doctest::Approx(series).epsilon(1e-12));
    CHECK(d.laplace(1.0) == doctest::Approx(std::pow(2.0 / 3.0, 3)).epsilon(1e-14));
    // density integrates to the cdf
    CHECK(simpson([&](double x) { return d.density(x); }, 0.0, t) ==
          doctest::Approx(series).epsilon(1e-9));
}

TEST_CASE("uniform support and transform") {
    const auto d = ScalarDistribution::uniform(0.0, 2.0);
    CHECK(d.mean() == doctest::Approx(1.0));
    CHECK(d.variance() == doctest::Approx(1.0 / 3.0));
    CHECK(d.cdf(0.5) == doctest::Approx(0.25));
    const double z = 1.7;
    CHECK(d.laplace(z) ==
          doctest::Approx(simpson([&](double x) { return std::exp(-z * x) * 0.5; }, 0.0, 2.0))
              .epsilon(1e-10));
    CHECK(d.laplace(1e-14) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("deterministic atom conventions") {
    const auto d = ScalarDistribution::deterministic(1.5);
    CHECK(d.cdf(1.5) == 1.0);
    CHECK(d.cdf_left(1.5) == 0.0);
    CHECK(d.cdf(1.4999) == 0.0);
    CHECK(d.mean() == 1.5);
    CHECK(d.variance() == 0.0);
    CHECK(d.atoms().size() == 1);
    Rng rng(7);
    CHECK(d.sample(rng) == 1.5);
}

TEST_CASE("tabulated piecewise-linear law") {
    // Equivalent to uniform(0, 2).
    const auto u = ScalarDistribution::tabulated({0.0, 1.0, 2.0}, {0.0, 0.5, 1.0});
    CHECK(u.mean() == doctest::Approx(1.0));
    CHECK(u.variance() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(u.cdf(0.5) == doctest::Approx(0.25));
    CHECK(u.quantile(0.25) == doctest::Approx(0.5));
    CHECK(u.laplace(1.3) ==
          doctest::Approx(ScalarDistribution::uniform(0.0, 2.0).laplace(1.3)).epsilon(1e-12));

    // Atom of mass 0.3 at the left edge.
    const auto a = ScalarDistribution::tabulated({0.5, 1.0}, {0.3, 1.0});
    CHECK(a.atoms().size() == 1);
    CHECK(a.atoms()[0].mass == doctest::Approx(0.3));
    CHECK(a.cdf_left(0.5) == 0.0);
    CHECK(a.cdf(0.5) == doctest::Approx(0.3));
    CHECK(a.mean() == doctest::Approx(0.3 * 0.5 + 0.7 * 0.75).epsilon(1e-12));

    // Defective tail: moments are undefined.
    const auto bad = ScalarDistribution::tabulated({0.0, 1.0}, {0.0, 0.8});
    CHECK_THROWS_AS((void)bad.mean(), NonfiniteMoment);
    CHECK_THROWS_AS((void)bad.laplace(1.0), NonfiniteMoment);
}

TEST_CASE("construction validation") {
    CHECK_THROWS_AS(ScalarDistribution::exponential(0.0), ValidationError);
    CHECK_THROWS_AS(ScalarDistribution::uniform(2.0, 1.0), ValidationError);
    CHECK_THROWS_AS(ScalarDistribution::uniform(-0.5, 1.0), ValidationError);
    CHECK_THROWS_AS(ScalarDistribution::deterministic(-1.0), ValidationError);
    CHECK_THROWS_AS(ScalarDistribution::erlang(0, 1.0), ValidationError);
    CHECK_THROWS_AS(ScalarDistribution::tabulated({1.0, 0.5}, {0.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(ScalarDistribution::tabulated({0.0, 1.0}, {0.5, 0.4}), ValidationError);
}

TEST_CASE("sampling matches moments at fixed seed") {
    const auto d = ScalarDistribution::erlang(2, 3.0);
    Rng rng(123456);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = d.sample(rng);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - d.mean()) <= 4.0 * std::sqrt(d.variance() / n));
    CHECK(std::abs(var - d.variance()) <= 0.05 * d.variance());
}

TEST_CASE("cdf is nondecreasing with limit 1") {
    const std::vector<ScalarDistribution> laws{
        ScalarDistribution::exponential(0.7), ScalarDistribution::uniform(0.2, 1.1),
        ScalarDistribution::erlang(4, 2.5), ScalarDistribution::deterministic(0.4),
        ScalarDistribution::tabulated({0.0, 0.3, 2.0}, {0.1, 0.4, 1.0})};
    for (const auto& d : laws) {
        double prev = 0.0;
        for (double t = 0.0; t <= 8.0; t += 0.01) {
            const double c = d.cdf(t);
            CHECK(c >= prev - 1e-15);
            CHECK(d.cdf_left(t) <= c + 1e-15);
            prev = c;
        }
        CHECK(d.cdf(d.tail_cutoff(1e-12) + 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    }
}
