#include "randsum/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "randsum/errors.hpp"

namespace randsum {

double RunningStats::mean() const { return n ? s1 / static_cast<double>(n) : 0.0; }

double RunningStats::variance() const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double m = s1 / nn;
    return std::max(0.0, (s2 - nn * m * m) / (nn - 1.0));
}

double RunningStats::central4() const {
    if (n == 0) return 0.0;
    const double nn = static_cast<double>(n);
    const double m = s1 / nn;
    const double r2 = s2 / nn, r3 = s3 / nn, r4 = s4 / nn;
    return std::max(0.0, r4 - 4.0 * m * r3 + 6.0 * m * m * r2 - 3.0 * m * m * m * m);
}

double RunningStats::std_err_mean() const {
    if (n < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(n));
}

double RunningStats::std_err_variance() const {
    if (n < 2) return 0.0;
    const double v = variance();
    return std::sqrt(std::max(0.0, central4() - v * v) / static_cast<double>(n));
}

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
    const double n = static_cast<double>(sorted.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const double f = cdf(sorted[i]);
        const double lo = f - static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n - f;
        d = std::max({d, lo, hi});
    }
    return d;
}

double ks_critical_value(std::uint64_t n, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("ks_critical_value: bad alpha");
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf,
                 double alpha) {
    if (sample.empty()) throw ValidationError("ks_test: empty sample");
    std::sort(sample.begin(), sample.end());
    KsResult r{};
    r.statistic = ks_statistic(sample, cdf);
    r.critical = ks_critical_value(sample.size(), alpha);
    r.pass = r.statistic <= r.critical;
    return r;
}

ChiSquareResult chi_square_geometric(std::span<const std::uint64_t> counts, double q,
                                     double alpha) {
    if (counts.size() < 2) throw ValidationError("chi_square_geometric: need >= 2 cells");
    std::uint64_t total = 0;
    for (std::uint64_t c : counts) total += c;
    const double n = static_cast<double>(total);

    // Expected mass per cell; last cell is the geometric tail.
    std::vector<double> expected(counts.size());
    double head = 0.0;
    for (std::size_t k = 0; k + 1 < counts.size(); ++k) {
        expected[k] = n * q * std::pow(1.0 - q, static_cast<double>(k));
        head += expected[k];
    }
    expected.back() = std::max(0.0, n - head);

    std::vector<double> obs(counts.begin(), counts.end());
    // Pool from the right until every expected count reaches 5.
    while (expected.size() > 2 && expected.back() < 5.0) {
        expected[expected.size() - 2] += expected.back();
        obs[obs.size() - 2] += obs.back();
        expected.pop_back();
        obs.pop_back();
    }

    double stat = 0.0;
    for (std::size_t k = 0; k < expected.size(); ++k) {
        if (expected[k] <= 0.0) continue;
        const double d = obs[k] - expected[k];
        stat += d * d / expected[k];
    }
    ChiSquareResult r{};
    r.statistic = stat;
    r.dof = expected.size() - 1;
    boost::math::chi_squared dist(static_cast<double>(r.dof));
    r.critical = boost::math::quantile(dist, 1.0 - alpha);
    r.pass = stat <= r.critical;
    return r;
}

} // namespace randsum
