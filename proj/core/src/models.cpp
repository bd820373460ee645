#include "randsum/models.hpp"

#include <cmath>

#include "quadrature.hpp"
#include "randsum/analytic.hpp"

namespace randsum {

GeigerCharacteristics geiger_characteristics(const GeigerModel& m, double t_max, double h) {
    if (!(m.lambda > 0.0)) throw ValidationError("geiger: lambda must be > 0");
    const double lam = m.lambda;
    const double q = 1.0 - m.lock.laplace(lam);
    if (!(q > 1e-12 && q < 1.0 - 1e-12))
        throw DegenerateLaw("geiger: q = " + std::to_string(q) + " is degenerate");

    // a0 = lambda * int t exp(-lambda t) G(t) dt
    const double cutoff = -std::log(1e-18) / lam;
    const double a0 =
        lam * detail::integrate([&](double t) { return t * std::exp(-lam * t) * m.lock.cdf(t); },
                                0.0, cutoff, m.lock.breakpoints());

    GeigerCharacteristics c{};
    c.q = q;
    c.mean_T = 1.0 / (lam * q);
    c.var_T = (2.0 * (q + lam * a0) - 1.0) / (lam * lam * q * q);
    c.survival = solve_survival(m.step_law(), t_max, h);
    return c;
}

RedundantCharacteristics redundant_characteristics(const RedundantModel& m) {
    if (!(m.lambda > 0.0)) throw ValidationError("redundant: lambda must be > 0");
    if (!(m.lambda_prime >= 0.0)) throw ValidationError("redundant: lambda_prime must be >= 0");
    const double lam = m.lambda;
    const double lam_sum = m.lambda + m.lambda_prime;
    const double q = 1.0 - m.repair.laplace(lam);
    if (!(q > 1e-12 && q < 1.0 - 1e-12))
        throw DegenerateLaw("redundant: q = " + std::to_string(q) + " is degenerate");

    const double cutoff = -std::log(1e-18) / lam;
    // int t exp(-lam t) G(t) dt and int t exp(-lam t) dG(t)
    const double int_cdf = detail::integrate(
        [&](double t) { return t * std::exp(-lam * t) * m.repair.cdf(t); }, 0.0, cutoff,
        m.repair.breakpoints());
    const double int_dg = detail::integrate_df(
        m.repair, [&](double t) { return t * std::exp(-lam * t); },
        std::numeric_limits<double>::infinity());

    StepMoments sm{};
    sm.q = q;
    sm.a = q / lam + 1.0 / lam_sum;
    sm.sigma2 = (2.0 - q * q) / (lam * lam) + 1.0 / (lam_sum * lam_sum) - 2.0 * int_cdf;
    sm.a0 = int_dg + (1.0 - q) / lam_sum;

    RedundantCharacteristics c{};
    c.q = q;
    c.mean_w1 = 1.0 / lam + 1.0 / (lam_sum * q);
    c.mean_wk = (lam + q * m.lambda_prime) / (lam * lam_sum * q);
    c.var_w1 = variance_random_sum(sm);
    c.var_wk = c.var_w1 - 1.0 / (lam_sum * lam_sum);
    c.alpha0_survival = {lam_sum * q};
    c.alpha1_survival = {lam};
    return c;
}

SsqsCharacteristics ssqs_characteristics(const SsqsModel& m) {
    if (!(m.lambda > 0.0)) throw ValidationError("ssqs: lambda must be > 0");
    const double lam = m.lambda;
    const double b = m.service.mean();
    const double rho = lam * b;
    if (!(rho < 1.0))
        throw StabilityViolation("ssqs: rho = " + std::to_string(rho) +
                                 " >= 1; no stationary regime");
    const double q = 1.0 - m.service.laplace(lam);
    if (!(q > 1e-12 && q < 1.0 - 1e-12))
        throw DegenerateLaw("ssqs: q = " + std::to_string(q) + " is degenerate");

    SsqsCharacteristics c{};
    c.q = q;
    c.b = b;
    c.rho = rho;
    c.p0 = 1.0 - rho;
    c.p1 = q * (1.0 - rho) / (1.0 - q);
    c.mean_alpha0 = (1.0 - q) / (lam * q);
    c.mean_alpha1 = 1.0 / lam;
    c.mean_alpha = 1.0 / (lam * q);
    c.mean_T = (1.0 - q) / (lam * q * (1.0 - rho));
    c.mean_beta = (rho - q) / (lam * q * (1.0 - rho));
    c.alpha0_law = {q, lam * q};
    c.alpha1_law = {lam};
    return c;
}

} // namespace randsum
