#include "randsum/analytic.hpp"

#include <cmath>

#include "quadrature.hpp"

namespace randsum {

double mean_random_sum(const StepMoments& m) {
    m.validate();
    return m.a / m.q;
}

double variance_random_sum(const StepMoments& m) {
    m.validate();
    const double v = m.sigma2 / m.q + (m.a * m.a * (m.q - 1.0) + 2.0 * m.a * m.a0) / (m.q * m.q);
    const double scale = std::max(1.0, m.sigma2 / m.q);
    if (v < -1e-9 * scale)
        throw NegativeVariance("variance formula produced " + std::to_string(v) +
                               "; StepMoments are inconsistent");
    return std::max(0.0, v);
}

double variance_independent_stop(double a, double sigma2, double q) {
    const double mean_nu = 1.0 / q;
    const double var_nu = (1.0 - q) / (q * q);
    return sigma2 * mean_nu + a * a * var_nu;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// E exp(-z X) for X with survival S via 1 - z * int exp(-z t) S(t) dt.
double laplace_of_survival(const std::function<double(double)>& surv, double z, double cutoff,
                           const std::vector<double>& breaks) {
    if (z == 0.0) return 1.0;
    const double upper = std::min(cutoff, -std::log(1e-18) / z);
    return 1.0 -
           z * detail::integrate([&](double t) { return std::exp(-z * t) * surv(t); }, 0.0, upper,
                                 breaks);
}

std::vector<double> merged_breaks(const ScalarDistribution& a, const ScalarDistribution& b) {
    std::vector<double> cuts = a.breakpoints();
    auto bb = b.breakpoints();
    cuts.insert(cuts.end(), bb.begin(), bb.end());
    return cuts;
}

} // namespace

LaplaceTransforms laplace_transforms(const JointStepLaw& law) {
    using Coupling = JointStepLaw::Coupling;
    LaplaceTransforms lt;
    switch (law.coupling()) {
        case Coupling::independent: {
            const ScalarDistribution zeta = law.zeta_component();
            const double q = law.q();
            lt.psi = [zeta](double z) { return zeta.laplace(z); };
            lt.psi0 = [zeta, q](double z) { return (1.0 - q) * zeta.laplace(z); };
            return lt;
        }
        case Coupling::min_threshold: {
            const ScalarDistribution tau = law.tau();
            const ScalarDistribution eta = law.eta();
            if (tau.is_exponential()) {
                // psi0(z) = phi_eta(z + lambda); psi assembles from the same block.
                const double lam = tau.rate();
                lt.psi = [eta, lam](double z) {
                    const double pe = eta.laplace(z + lam);
                    return lam / (z + lam) * (1.0 - pe) + pe;
                };
                lt.psi0 = [eta, lam](double z) { return eta.laplace(z + lam); };
                return lt;
            }
            const double cutoff = std::min(tau.tail_cutoff(), eta.tail_cutoff());
            const auto cuts = merged_breaks(tau, eta);
            lt.psi = [tau, eta, cutoff, cuts](double z) {
                return laplace_of_survival(
                    [&](double t) { return tau.survival(t) * eta.survival(t); }, z, cutoff, cuts);
            };
            lt.psi0 = [tau, eta](double z) {
                return detail::integrate_df(
                    eta,
                    [&](double x) { return std::exp(-z * x) * tau.survival_left(x); }, kInf,
                    detail::RightEnd::closed, tau.breakpoints());
            };
            return lt;
        }
        case Coupling::race_step: {
            const ScalarDistribution tau = law.tau();
            const ScalarDistribution eta = law.eta();
            lt.psi = [tau](double z) { return tau.laplace(z); };
            if (tau.is_exponential()) {
                const double lam = tau.rate();
                lt.psi0 = [eta, lam](double z) {
                    // lambda * L[G](z + lambda) with L the plain transform of the CDF.
                    const double s = z + lam;
                    return lam * eta.laplace(s) / s;
                };
                return lt;
            }
            lt.psi0 = [tau, eta](double z) {
                return detail::integrate_df(
                    tau, [&](double x) { return std::exp(-z * x) * eta.cdf(x); }, kInf,
                    detail::RightEnd::closed, eta.breakpoints());
            };
            return lt;
        }
        case Coupling::shifted_min: {
            const LaplaceTransforms base =
                laplace_transforms(JointStepLaw::min_threshold(law.tau(), law.eta()));
            const ScalarDistribution shift = law.shift();
            lt.psi = [base, shift](double z) { return base.psi(z) * shift.laplace(z); };
            lt.psi0 = [base, shift](double z) { return base.psi0(z) * shift.laplace(z); };
            return lt;
        }
    }
    return lt;
}

double AnalyticSurvival::operator()(double t) const { return std::exp(-rate * t); }

std::optional<AnalyticSurvival> closed_form_survival(const JointStepLaw& law) {
    using Coupling = JointStepLaw::Coupling;
    switch (law.coupling()) {
        case Coupling::min_threshold:
            if (law.tau().is_exponential()) return AnalyticSurvival{law.tau().rate()};
            return std::nullopt;
        case Coupling::independent:
            if (law.zeta_component().is_exponential())
                return AnalyticSurvival{law.zeta_component().rate() * law.q()};
            return std::nullopt;
        default: return std::nullopt;
    }
}

LimitDiagnostics scaled_limit_diagnostics(const JointStepLaw& law,
                                          std::span<const double> z_grid) {
    const LaplaceTransforms lt = laplace_transforms(law);
    const double q = law.q();
    const double a = law.moments().a;
    LimitDiagnostics d{};
    d.errors.reserve(z_grid.size());
    d.sup_error = 0.0;
    for (double z : z_grid) {
        const double err = std::abs(lt.phi(q * z) - 1.0 / (1.0 + a * z));
        d.errors.push_back(err);
        d.sup_error = std::max(d.sup_error, err);
    }
    return d;
}

} // namespace randsum
