#pragma once

#include <cstdint>
#include <vector>

#include "randsum/errors.hpp"
#include "randsum/rng.hpp"

namespace randsum {

/// A point mass of a distribution: P(X = x) = mass.
struct PointMass {
    double x;
    double mass;
};

/*
 * One nonnegative random duration. Five kinds are supported:
 *
 *   exponential(rate)        density rate*exp(-rate*t)
 *   deterministic(value)     unit atom at value
 *   uniform(lo, hi)          flat density on [lo, hi], 0 <= lo < hi
 *   erlang(shape, rate)      sum of `shape` independent exponential(rate)
 *   tabulated(grid, cdf)     piecewise-linear CDF through (grid[i], cdf[i])
 *
 * Support is [0, inf): P(X < 0) = 0 always. The stored CDF is
 * right-continuous, cdf(t) = P(X <= t); cdf_left(t) = P(X < t) differs from
 * it only at atoms. A tabulated law is continuous between nodes and may carry
 * a single atom at grid.front() when cdf.front() > 0; a tabulated CDF whose
 * last value stays below 1 is defective and raises NonfiniteMoment when a
 * moment, a Laplace transform or a sample would need the missing tail.
 */
class ScalarDistribution {
  public:
    enum class Kind { exponential, deterministic, uniform, erlang, tabulated };

    static ScalarDistribution exponential(double rate);
    static ScalarDistribution deterministic(double value);
    static ScalarDistribution uniform(double lo, double hi);
    static ScalarDistribution erlang(int shape, double rate);
    static ScalarDistribution tabulated(std::vector<double> grid, std::vector<double> cdf);

    Kind kind() const { return kind_; }

    double cdf(double t) const;      // P(X <= t)
    double cdf_left(double t) const; // P(X < t)
    double survival(double t) const { return 1.0 - cdf(t); }       // P(X > t)
    double survival_left(double t) const { return 1.0 - cdf_left(t); } // P(X >= t)

    /// Density of the continuous part (0 where there is none).
    double density(double t) const;
    bool has_continuous_part() const;

    /// Atoms of the law (empty for the continuous kinds).
    std::vector<PointMass> atoms() const;

    double mean() const;
    double second_moment() const;
    double variance() const;

    /// Laplace-Stieltjes transform E[exp(-z X)] for z >= 0.
    double laplace(double z) const;

    /// Inverse CDF for u in (0, 1).
    double quantile(double u) const;

    double sample(Rng& rng) const;

    /// Point beyond which P(X > t) <= eps; finite for every kind.
    double tail_cutoff(double eps = 1e-18) const;

    /// Abscissae where the density or an integrand against it may kink.
    std::vector<double> breakpoints() const;

    // Parameter access for closed-form shortcuts.
    bool is_exponential() const { return kind_ == Kind::exponential; }
    double rate() const { return rate_; }
    int shape() const { return shape_; }
    double value() const { return value_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& cdf_values() const { return cdf_; }

  private:
    ScalarDistribution() = default;

    void require_proper(const char* what) const;

    Kind kind_ = Kind::exponential;
    double rate_ = 1.0;  // exponential, erlang
    int shape_ = 1;      // erlang
    double value_ = 0.0; // deterministic
    double lo_ = 0.0, hi_ = 1.0; // uniform
    std::vector<double> grid_, cdf_; // tabulated
};

} // namespace randsum
