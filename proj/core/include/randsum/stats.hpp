#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace randsum {

/*
 * Streaming raw moments up to order four. Merging partial accumulators is an
 * exact sum, so chunked (parallel) accumulation reproduces the sequential
 * result bit-for-bit when merged in a fixed order.
 */
struct RunningStats {
    std::uint64_t n = 0;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;

    void add(double x) {
        ++n;
        const double x2 = x * x;
        s1 += x;
        s2 += x2;
        s3 += x2 * x;
        s4 += x2 * x2;
    }

    void merge(const RunningStats& o) {
        n += o.n;
        s1 += o.s1;
        s2 += o.s2;
        s3 += o.s3;
        s4 += o.s4;
    }

    double mean() const;
    double variance() const;        // unbiased
    double central4() const;        // fourth central moment
    double std_err_mean() const;
    double std_err_variance() const; // sqrt((m4 - var^2)/n)
};

/// One-sample Kolmogorov-Smirnov statistic of `sorted` against the CDF.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Asymptotic KS critical value at significance alpha for sample size n.
double ks_critical_value(std::uint64_t n, double alpha);

struct KsResult {
    double statistic;
    double critical;
    bool pass;
};

/// Sorts a copy of the sample and runs the one-sample test.
KsResult ks_test(std::vector<double> sample, const std::function<double(double)>& cdf,
                 double alpha = 0.01);

/*
 * Chi-square goodness of fit of stop-count frequencies against the geometric
 * law P(N = k) = q (1-q)^(k-1). counts[k-1] holds the observed frequency of
 * N = k; the final entry aggregates everything above. Cells are pooled from
 * the right until every expectation is >= 5.
 */
struct ChiSquareResult {
    double statistic;
    double critical;
    std::size_t dof;
    bool pass;
};

ChiSquareResult chi_square_geometric(std::span<const std::uint64_t> counts, double q,
                                     double alpha = 0.01);

} // namespace randsum
