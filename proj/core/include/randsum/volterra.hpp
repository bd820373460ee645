#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "randsum/analytic.hpp"
#include "randsum/step_law.hpp"

namespace randsum {

/*
 * Survival function P(S >= t) tabulated on the uniform grid t_j = j * h,
 * linearly interpolated between nodes. Node 0 stores the t -> 0 limit, which
 * is 1 for every admissible law.
 */
struct SurvivalCurve {
    double t0 = 0.0;
    double h = 0.0;
    std::vector<double> values;

    double t_max() const { return t0 + h * (values.empty() ? 0 : values.size() - 1); }

    /// Linear interpolation; clamps to the end values outside the grid.
    double at(double t) const;

    /// CDF view: 1 - at(t) for t >= 0, 0 below.
    double cdf(double t) const;

    /// Trapezoidal integral of the survival, truncated where it drops below
    /// `floor`; estimates E S when the tail is captured.
    double integral(double floor = 1e-8) const;

    /// CSV with header "t,survival", one row per node, 12 significant digits.
    void write_csv(std::ostream& os) const;
    static SurvivalCurve read_csv(std::istream& is);
};

/*
 * Marching solution of the renewal-type equation
 *
 *   P(t) = P(zeta >= t) + integral over [0, t) of P(t - x) dF0(x)
 *
 * on the uniform grid with step h. Continuous kernel mass is applied per cell
 * at the cell midpoint (linear interpolation of P), atoms of F0 are snapped
 * to the nearest node. Second-order accurate for smooth kernels.
 */
SurvivalCurve solve_survival(const JointStepLaw& law, double t_max, double h);

/*
 * Independent re-evaluation of the equation's right side at every `stride`-th
 * node using a `refine`-times finer kernel discretization and the solved
 * curve interpolated; returns the sup deviation from the curve.
 */
double volterra_residual(const JointStepLaw& law, const SurvivalCurve& curve, int refine = 8,
                         int stride = 10);

/// Gaver-Stehfest inversion of a Laplace transform at t > 0. `transform` is
/// the plain transform of the function being recovered.
double gaver_stehfest(const std::function<double(double)>& transform, double t, int order = 12);

/// Extended-precision variant for transforms with an analytic long-double
/// form. The weight magnitudes grow to ~1e12 by order 22, so double-rounded
/// transform values floor the accuracy near 1e-4; a long-double transform
/// keeps high orders meaningful.
double gaver_stehfest_ld(const std::function<long double(long double)>& transform, double t,
                         int order = 12);

/*
 * Survival of S from its transform phi by Gaver-Stehfest applied to
 * F_S^(z) = phi(z)/z at each positive node. Successive orders
 * {order-2, order, order+2} are compared; disagreement beyond 1e-3 at any
 * node raises InversionUnstable. Values are clamped to [0, 1].
 */
std::vector<double> invert_laplace(const LaplaceTransforms& lt, std::span<const double> t_grid,
                                   int order = 12, bool stability_check = true);

/// Same inversion on the uniform grid (node 0 is pinned to 1).
SurvivalCurve invert_laplace_curve(const LaplaceTransforms& lt, double t_max, double h,
                                   int order = 12, bool stability_check = true);

} // namespace randsum
