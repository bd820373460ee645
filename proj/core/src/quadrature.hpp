#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "randsum/scalar_distribution.hpp"

namespace randsum::detail {

inline constexpr double kQuadTol = 1e-10;

/// Adaptive Gauss-Kronrod on [a, b], split at the supplied breakpoints.
template <typename Fn>
double integrate(Fn&& f, double a, double b, const std::vector<double>& breaks = {},
                 double tol = kQuadTol) {
    if (!(b > a)) return 0.0;
    std::vector<double> cuts{a, b};
    for (double c : breaks)
        if (c > a && c < b) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-300) continue;
        total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
            f, cuts[i], cuts[i + 1], 12, tol);
    }
    return total;
}

enum class RightEnd { closed, open };

/*
 * Stieltjes integral of g against dF over [0, upper], continuous density plus
 * atoms. `upper` may be +inf; integration is truncated at the distribution's
 * tail cutoff (the integrand must stay bounded). `extra_breaks` marks kinks
 * of g itself.
 */
template <typename Fn>
double integrate_df(const ScalarDistribution& dist, Fn&& g, double upper,
                    RightEnd right = RightEnd::closed,
                    const std::vector<double>& extra_breaks = {}) {
    double total = 0.0;
    const double hi = std::min(upper, dist.tail_cutoff());
    if (dist.has_continuous_part() && hi > 0.0) {
        std::vector<double> cuts = dist.breakpoints();
        cuts.insert(cuts.end(), extra_breaks.begin(), extra_breaks.end());
        total += integrate([&](double x) { return g(x) * dist.density(x); }, 0.0, hi, cuts);
    }
    for (const PointMass& a : dist.atoms()) {
        const bool in = (right == RightEnd::closed) ? (a.x <= upper) : (a.x < upper);
        if (in) total += g(a.x) * a.mass;
    }
    return total;
}

} // namespace randsum::detail
