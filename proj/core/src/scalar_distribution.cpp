#include "randsum/scalar_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace randsum {

namespace {

void check(bool ok, const std::string& msg) {
    if (!ok) throw ValidationError(msg);
}

// (exp(-z a) - exp(-z b)) / (z (b - a)), the transform of a flat density on
// [a, b]; stable for z -> 0.
double flat_piece_laplace(double z, double a, double b) {
    const double zd = z * (b - a);
    if (zd < 1e-12) return std::exp(-z * a) * (1.0 - 0.5 * zd);
    return std::exp(-z * a) * (-std::expm1(-zd)) / zd;
}

} // namespace

ScalarDistribution ScalarDistribution::exponential(double rate) {
    check(rate > 0.0 && std::isfinite(rate), "exponential: rate must be finite and > 0");
    ScalarDistribution d;
    d.kind_ = Kind::exponential;
    d.rate_ = rate;
    return d;
}

ScalarDistribution ScalarDistribution::deterministic(double value) {
    check(value >= 0.0 && std::isfinite(value), "deterministic: value must be finite and >= 0");
    ScalarDistribution d;
    d.kind_ = Kind::deterministic;
    d.value_ = value;
    return d;
}

ScalarDistribution ScalarDistribution::uniform(double lo, double hi) {
    check(lo >= 0.0 && std::isfinite(lo), "uniform: lo must be finite and >= 0");
    check(hi > lo && std::isfinite(hi), "uniform: hi must be finite and > lo");
    ScalarDistribution d;
    d.kind_ = Kind::uniform;
    d.lo_ = lo;
    d.hi_ = hi;
    return d;
}

ScalarDistribution ScalarDistribution::erlang(int shape, double rate) {
    check(shape >= 1, "erlang: shape must be >= 1");
    check(rate > 0.0 && std::isfinite(rate), "erlang: rate must be finite and > 0");
    ScalarDistribution d;
    d.kind_ = Kind::erlang;
    d.shape_ = shape;
    d.rate_ = rate;
    return d;
}

ScalarDistribution ScalarDistribution::tabulated(std::vector<double> grid, std::vector<double> cdf) {
    check(grid.size() >= 2 && grid.size() == cdf.size(),
          "tabulated: grid and cdf need equal sizes >= 2");
    check(grid.front() >= 0.0, "tabulated: grid must start at t >= 0");
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
        check(grid[i] < grid[i + 1], "tabulated: grid must be strictly increasing");
    check(cdf.front() >= 0.0 && cdf.back() <= 1.0 + 1e-12, "tabulated: cdf values must lie in [0,1]");
    for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
        check(cdf[i] <= cdf[i + 1], "tabulated: cdf must be nondecreasing");
    ScalarDistribution d;
    d.kind_ = Kind::tabulated;
    d.grid_ = std::move(grid);
    d.cdf_ = std::move(cdf);
    d.cdf_.back() = std::min(d.cdf_.back(), 1.0);
    return d;
}

void ScalarDistribution::require_proper(const char* what) const {
    if (kind_ == Kind::tabulated && cdf_.back() < 1.0 - 1e-12)
        throw NonfiniteMoment(std::string("tabulated law is defective (cdf tops out at ") +
                              std::to_string(cdf_.back()) + "); cannot compute " + what);
}

double ScalarDistribution::cdf(double t) const {
    if (t < 0.0) return 0.0;
    switch (kind_) {
        case Kind::exponential: return -std::expm1(-rate_ * t);
        case Kind::deterministic: return t >= value_ ? 1.0 : 0.0;
        case Kind::uniform:
            if (t <= lo_) return 0.0;
            if (t >= hi_) return 1.0;
            return (t - lo_) / (hi_ - lo_);
        case Kind::erlang:
            return boost::math::gamma_p(static_cast<double>(shape_), rate_ * t);
        case Kind::tabulated: {
            if (t < grid_.front()) return 0.0;
            if (t >= grid_.back()) return cdf_.back();
            auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
            const double w = (t - grid_[i]) / (grid_[i + 1] - grid_[i]);
            return cdf_[i] + w * (cdf_[i + 1] - cdf_[i]);
        }
    }
    return 0.0;
}

double ScalarDistribution::cdf_left(double t) const {
    switch (kind_) {
        case Kind::deterministic: return t > value_ ? 1.0 : 0.0;
        case Kind::tabulated:
            if (t <= grid_.front()) return 0.0;
            return cdf(t);
        default:
            return cdf(t); // continuous kinds
    }
}

double ScalarDistribution::density(double t) const {
    if (t < 0.0) return 0.0;
    switch (kind_) {
        case Kind::exponential: return rate_ * std::exp(-rate_ * t);
        case Kind::deterministic: return 0.0;
        case Kind::uniform: return (t >= lo_ && t <= hi_) ? 1.0 / (hi_ - lo_) : 0.0;
        case Kind::erlang: {
            if (t == 0.0) return shape_ == 1 ? rate_ : 0.0;
            const double log_pdf = shape_ * std::log(rate_) + (shape_ - 1) * std::log(t) -
                                   rate_ * t - std::lgamma(static_cast<double>(shape_));
            return std::exp(log_pdf);
        }
        case Kind::tabulated: {
            if (t < grid_.front() || t >= grid_.back()) return 0.0;
            auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
            const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
            return (cdf_[i + 1] - cdf_[i]) / (grid_[i + 1] - grid_[i]);
        }
    }
    return 0.0;
}

bool ScalarDistribution::has_continuous_part() const {
    switch (kind_) {
        case Kind::deterministic: return false;
        case Kind::tabulated: return cdf_.back() > cdf_.front();
        default: return true;
    }
}

std::vector<PointMass> ScalarDistribution::atoms() const {
    switch (kind_) {
        case Kind::deterministic: return {{value_, 1.0}};
        case Kind::tabulated:
            if (cdf_.front() > 0.0) return {{grid_.front(), cdf_.front()}};
            return {};
        default: return {};
    }
}

double ScalarDistribution::mean() const {
    switch (kind_) {
        case Kind::exponential: return 1.0 / rate_;
        case Kind::deterministic: return value_;
        case Kind::uniform: return 0.5 * (lo_ + hi_);
        case Kind::erlang: return shape_ / rate_;
        case Kind::tabulated: {
            require_proper("mean");
            double m = cdf_.front() * grid_.front();
            for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
                m += (cdf_[i + 1] - cdf_[i]) * 0.5 * (grid_[i] + grid_[i + 1]);
            return m;
        }
    }
    return 0.0;
}

double ScalarDistribution::second_moment() const {
    switch (kind_) {
        case Kind::exponential: return 2.0 / (rate_ * rate_);
        case Kind::deterministic: return value_ * value_;
        case Kind::uniform: return (lo_ * lo_ + lo_ * hi_ + hi_ * hi_) / 3.0;
        case Kind::erlang: return shape_ * (shape_ + 1) / (rate_ * rate_);
        case Kind::tabulated: {
            require_proper("second moment");
            double m2 = cdf_.front() * grid_.front() * grid_.front();
            for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
                const double a = grid_[i], b = grid_[i + 1];
                m2 += (cdf_[i + 1] - cdf_[i]) * (a * a + a * b + b * b) / 3.0;
            }
            return m2;
        }
    }
    return 0.0;
}

double ScalarDistribution::variance() const {
    const double m = mean();
    return std::max(0.0, second_moment() - m * m);
}

double ScalarDistribution::laplace(double z) const {
    if (z == 0.0) {
        require_proper("Laplace transform at 0");
        return 1.0;
    }
    switch (kind_) {
        case Kind::exponential: return rate_ / (z + rate_);
        case Kind::deterministic: return std::exp(-z * value_);
        case Kind::uniform: return flat_piece_laplace(z, lo_, hi_);
        case Kind::erlang: return std::pow(rate_ / (z + rate_), shape_);
        case Kind::tabulated: {
            require_proper("Laplace transform");
            double v = cdf_.front() * std::exp(-z * grid_.front());
            for (std::size_t i = 0; i + 1 < grid_.size(); ++i)
                v += (cdf_[i + 1] - cdf_[i]) * flat_piece_laplace(z, grid_[i], grid_[i + 1]);
            return v;
        }
    }
    return 0.0;
}

double ScalarDistribution::quantile(double u) const {
    check(u > 0.0 && u < 1.0, "quantile: u must lie in (0,1)");
    switch (kind_) {
        case Kind::exponential: return -std::log1p(-u) / rate_;
        case Kind::deterministic: return value_;
        case Kind::uniform: return lo_ + u * (hi_ - lo_);
        case Kind::erlang: {
            boost::math::gamma_distribution<double> g(static_cast<double>(shape_), 1.0 / rate_);
            return boost::math::quantile(g, u);
        }
        case Kind::tabulated: {
            if (u <= cdf_.front()) return grid_.front();
            if (u > cdf_.back()) require_proper("quantile beyond the tabulated mass");
            auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
            const std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
            if (cdf_[i] == u || cdf_[i] == cdf_[i - 1]) return grid_[i];
            const double w = (u - cdf_[i - 1]) / (cdf_[i] - cdf_[i - 1]);
            return grid_[i - 1] + w * (grid_[i] - grid_[i - 1]);
        }
    }
    return 0.0;
}

double ScalarDistribution::sample(Rng& rng) const {
    switch (kind_) {
        case Kind::exponential: return rng.exponential(rate_);
        case Kind::deterministic: return value_; // consumes no randomness
        case Kind::uniform: return rng.uniform(lo_, hi_);
        case Kind::erlang: {
            double s = 0.0;
            for (int i = 0; i < shape_; ++i) s += rng.exponential(rate_);
            return s;
        }
        case Kind::tabulated: return quantile(rng.uniform01());
    }
    return 0.0;
}

double ScalarDistribution::tail_cutoff(double eps) const {
    switch (kind_) {
        case Kind::exponential: return -std::log(eps) / rate_;
        case Kind::deterministic: return value_;
        case Kind::uniform: return hi_;
        case Kind::erlang: {
            boost::math::gamma_distribution<double> g(static_cast<double>(shape_), 1.0 / rate_);
            return boost::math::quantile(boost::math::complement(g, eps));
        }
        case Kind::tabulated: return grid_.back();
    }
    return std::numeric_limits<double>::infinity();
}

std::vector<double> ScalarDistribution::breakpoints() const {
    switch (kind_) {
        case Kind::deterministic: return {value_};
        case Kind::uniform: return {lo_, hi_};
        case Kind::tabulated: return grid_;
        default: return {};
    }
}

} // namespace randsum
