#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "randsum/step_law.hpp"

namespace randsum {

/*
 * Laplace-Stieltjes transforms of one step and of the stopped sum, as
 * evaluators on real z >= 0:
 *
 *   psi(z)  = E exp(-z zeta)
 *   psi0(z) = E exp(-z zeta) I(eps = 0)
 *   psi1(z) = psi(z) - psi0(z)
 *   phi(z)  = E exp(-z S) = (psi - psi0) / (1 - psi0)
 *
 * All four map [0, inf) into [0, 1] and are completely monotone.
 */
struct LaplaceTransforms {
    std::function<double(double)> psi;
    std::function<double(double)> psi0;

    double psi1(double z) const { return psi(z) - psi0(z); }
    double phi(double z) const {
        const double p0 = psi0(z);
        return (psi(z) - p0) / (1.0 - p0);
    }
};

/// Mean and variance of the stopped sum S.
struct RandomSumMoments {
    double mean;     // a / q
    double variance; // sigma2/q + (a^2 (q-1) + 2 a a0) / q^2
};

/// E S = a / q (Wald).
double mean_random_sum(const StepMoments& m);

/// Var S = sigma2/q + (a^2(q-1) + 2 a a0)/q^2; throws NegativeVariance on
/// inconsistent input.
double variance_random_sum(const StepMoments& m);

inline RandomSumMoments random_sum_moments(const StepMoments& m) {
    return {mean_random_sum(m), variance_random_sum(m)};
}

/// Variance formula valid only when the stop count and the summands are
/// independent: Var(zeta) E(nu) + (E zeta)^2 Var(nu). Kept for the reduction
/// identity and as the deliberately-wrong prediction in the dependent tests.
double variance_independent_stop(double a, double sigma2, double q);

/// Transforms of the step law; closed forms where the components admit them,
/// quadrature otherwise.
LaplaceTransforms laplace_transforms(const JointStepLaw& law);

/*
 * Exact survival of S when the law matches a known special case:
 *   min_threshold with exponential tau      -> exp(-rate * t), rate = tau rate
 *   independent with exponential zeta       -> exp(-rate * t), rate = zeta rate * q
 * Anything else returns nullopt.
 */
struct AnalyticSurvival {
    double rate;
    double operator()(double t) const;
};

std::optional<AnalyticSurvival> closed_form_survival(const JointStepLaw& law);

/*
 * Small-q diagnostic: the transform of the rescaled sum q*S approaches
 * 1/(1 + a z). Returns the per-node and sup deviations of phi(q z) from that
 * limit over the supplied grid of z >= 0.
 */
struct LimitDiagnostics {
    std::vector<double> errors;
    double sup_error;
};

LimitDiagnostics scaled_limit_diagnostics(const JointStepLaw& law, std::span<const double> z_grid);

} // namespace randsum
