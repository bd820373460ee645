#include "randsum/step_law.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "quadrature.hpp"

namespace randsum {

namespace {
constexpr double kDegenerateTol = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();
} // namespace

void StepMoments::validate() const {
    if (!(a >= 0.0) || !std::isfinite(a)) throw ValidationError("StepMoments: a must be >= 0");
    if (!(sigma2 >= 0.0) || !std::isfinite(sigma2))
        throw ValidationError("StepMoments: sigma2 must be >= 0");
    if (!(a0 >= -1e-12 && a0 <= a + 1e-12))
        throw ValidationError("StepMoments: a0 must lie in [0, a]");
    if (!(q > 0.0 && q < 1.0)) throw ValidationError("StepMoments: q must lie in (0,1)");
}

JointStepLaw::JointStepLaw(Coupling c, ScalarDistribution tau,
                           std::optional<ScalarDistribution> eta,
                           std::optional<ScalarDistribution> shift,
                           std::optional<double> stored_q)
    : coupling_(c), tau_(std::move(tau)), eta_(std::move(eta)), shift_(std::move(shift)) {
    q_ = stored_q ? *stored_q : compute_q();
    validate();
}

JointStepLaw JointStepLaw::independent(ScalarDistribution zeta, double q) {
    return JointStepLaw(Coupling::independent, std::move(zeta), std::nullopt, std::nullopt, q);
}

JointStepLaw JointStepLaw::min_threshold(ScalarDistribution tau, ScalarDistribution eta) {
    return JointStepLaw(Coupling::min_threshold, std::move(tau), std::move(eta), std::nullopt,
                        std::nullopt);
}

JointStepLaw JointStepLaw::race_step(ScalarDistribution tau, ScalarDistribution eta) {
    return JointStepLaw(Coupling::race_step, std::move(tau), std::move(eta), std::nullopt,
                        std::nullopt);
}

JointStepLaw JointStepLaw::shifted_min(ScalarDistribution tau, ScalarDistribution eta,
                                       ScalarDistribution shift) {
    return JointStepLaw(Coupling::shifted_min, std::move(tau), std::move(eta), std::move(shift),
                        std::nullopt);
}

double JointStepLaw::compute_q() const {
    // q = P(tau < eta) = integral of P(tau < x) dG_eta(x).
    if (tau_.is_exponential()) return 1.0 - eta_->laplace(tau_.rate());
    return detail::integrate_df(
        *eta_, [&](double x) { return tau_.cdf_left(x); }, kInf, detail::RightEnd::closed,
        tau_.breakpoints());
}

void JointStepLaw::validate() const {
    if (!(q_ > kDegenerateTol && q_ < 1.0 - kDegenerateTol))
        throw DegenerateLaw("stopping probability q = " + std::to_string(q_) +
                            " is degenerate (must lie strictly inside (0,1))");
    double p_zero = 0.0;
    switch (coupling_) {
        case Coupling::independent: p_zero = tau_.cdf(0.0); break;
        case Coupling::race_step: p_zero = tau_.cdf(0.0); break;
        case Coupling::min_threshold:
            p_zero = 1.0 - tau_.survival(0.0) * eta_->survival(0.0);
            break;
        case Coupling::shifted_min:
            p_zero = (1.0 - tau_.survival(0.0) * eta_->survival(0.0)) * shift_->cdf(0.0);
            break;
    }
    if (p_zero >= 1.0 - 1e-12)
        throw ValidationError("JointStepLaw: P(zeta = 0) must be < 1");
}

SubCdfs JointStepLaw::min_sub_cdfs(double t, bool left) const {
    SubCdfs s{};
    if (t < 0.0 || (left && t <= 0.0)) return s;
    const auto end = left ? detail::RightEnd::open : detail::RightEnd::closed;
    s.f = left ? 1.0 - tau_.survival_left(t) * eta_->survival_left(t)
               : 1.0 - tau_.survival(t) * eta_->survival(t);
    s.f0 = detail::integrate_df(
        *eta_, [&](double x) { return tau_.survival_left(x); }, t, end, tau_.breakpoints());
    s.f1 = std::max(0.0, s.f - s.f0);
    return s;
}

SubCdfs JointStepLaw::sub_cdfs(double t) const {
    SubCdfs s{};
    if (t < 0.0) return s;
    switch (coupling_) {
        case Coupling::independent: {
            s.f = tau_.cdf(t);
            s.f0 = (1.0 - q_) * s.f;
            s.f1 = q_ * s.f;
            return s;
        }
        case Coupling::min_threshold: return min_sub_cdfs(t, false);
        case Coupling::race_step: {
            s.f = tau_.cdf(t);
            s.f0 = detail::integrate_df(
                tau_, [&](double x) { return eta_->cdf(x); }, t, detail::RightEnd::closed,
                eta_->breakpoints());
            s.f1 = std::max(0.0, s.f - s.f0);
            return s;
        }
        case Coupling::shifted_min: {
            // Convolve the min-part sub-measures with the independent shift:
            // dF0_min(x) = P(tau >= x) dG(x); dF1_min(x) = P(eta > x) dF_tau(x).
            std::vector<double> cuts = tau_.breakpoints();
            {
                auto eb = eta_->breakpoints();
                cuts.insert(cuts.end(), eb.begin(), eb.end());
            }
            std::vector<PointMass> atoms0, atoms1;
            for (const PointMass& a : eta_->atoms()) {
                const double m = a.mass * tau_.survival_left(a.x);
                if (m > 0.0) atoms0.push_back({a.x, m});
            }
            for (const PointMass& a : tau_.atoms()) {
                const double m = a.mass * eta_->survival(a.x);
                if (m > 0.0) atoms1.push_back({a.x, m});
            }
            s.f0 = detail::integrate(
                [&](double x) {
                    return shift_->cdf(t - x) * tau_.survival_left(x) * eta_->density(x);
                },
                0.0, std::min(t, eta_->tail_cutoff()), cuts);
            for (const PointMass& a : atoms0)
                if (a.x <= t) s.f0 += shift_->cdf(t - a.x) * a.mass;
            s.f1 = detail::integrate(
                [&](double x) { return shift_->cdf(t - x) * eta_->survival(x) * tau_.density(x); },
                0.0, std::min(t, tau_.tail_cutoff()), cuts);
            for (const PointMass& a : atoms1)
                if (a.x <= t) s.f1 += shift_->cdf(t - a.x) * a.mass;
            s.f = s.f0 + s.f1;
            return s;
        }
    }
    return s;
}

SubCdfs JointStepLaw::sub_cdfs_left(double t) const {
    SubCdfs s{};
    if (t <= 0.0) return s;
    switch (coupling_) {
        case Coupling::independent: {
            s.f = tau_.cdf_left(t);
            s.f0 = (1.0 - q_) * s.f;
            s.f1 = q_ * s.f;
            return s;
        }
        case Coupling::min_threshold: return min_sub_cdfs(t, true);
        case Coupling::race_step: {
            s.f = tau_.cdf_left(t);
            s.f0 = detail::integrate_df(
                tau_, [&](double x) { return eta_->cdf(x); }, t, detail::RightEnd::open,
                eta_->breakpoints());
            s.f1 = std::max(0.0, s.f - s.f0);
            return s;
        }
        case Coupling::shifted_min: {
            // Subtract the atoms sitting exactly at t.
            s = sub_cdfs(t);
            for (const PointMass& a : sub_atoms0())
                if (a.x == t) s.f0 -= a.mass;
            for (const PointMass& a : sub_atoms1())
                if (a.x == t) s.f1 -= a.mass;
            s.f = s.f0 + s.f1;
            return s;
        }
    }
    return s;
}

std::vector<PointMass> JointStepLaw::sub_atoms0() const {
    std::vector<PointMass> out;
    switch (coupling_) {
        case Coupling::independent:
            for (const PointMass& a : tau_.atoms()) out.push_back({a.x, (1.0 - q_) * a.mass});
            break;
        case Coupling::min_threshold:
            for (const PointMass& a : eta_->atoms()) {
                const double m = a.mass * tau_.survival_left(a.x);
                if (m > 0.0) out.push_back({a.x, m});
            }
            break;
        case Coupling::race_step:
            for (const PointMass& a : tau_.atoms()) {
                const double m = a.mass * eta_->cdf(a.x);
                if (m > 0.0) out.push_back({a.x, m});
            }
            break;
        case Coupling::shifted_min:
            for (const PointMass& am : eta_->atoms()) {
                const double m0 = am.mass * tau_.survival_left(am.x);
                if (m0 <= 0.0) continue;
                for (const PointMass& as : shift_->atoms())
                    out.push_back({am.x + as.x, m0 * as.mass});
            }
            break;
    }
    return out;
}

std::vector<PointMass> JointStepLaw::sub_atoms1() const {
    std::vector<PointMass> out;
    switch (coupling_) {
        case Coupling::independent:
            for (const PointMass& a : tau_.atoms()) out.push_back({a.x, q_ * a.mass});
            break;
        case Coupling::min_threshold:
        case Coupling::race_step:
            for (const PointMass& a : tau_.atoms()) {
                const double m = a.mass * eta_->survival(a.x);
                if (m > 0.0) out.push_back({a.x, m});
            }
            break;
        case Coupling::shifted_min:
            for (const PointMass& am : tau_.atoms()) {
                const double m1 = am.mass * eta_->survival(am.x);
                if (m1 <= 0.0) continue;
                for (const PointMass& as : shift_->atoms())
                    out.push_back({am.x + as.x, m1 * as.mass});
            }
            break;
    }
    return out;
}

std::optional<double> JointStepLaw::sub_density0(double t) const {
    if (t < 0.0) return 0.0;
    switch (coupling_) {
        case Coupling::independent: return (1.0 - q_) * tau_.density(t);
        case Coupling::min_threshold: return tau_.survival_left(t) * eta_->density(t);
        case Coupling::race_step: return eta_->cdf(t) * tau_.density(t);
        case Coupling::shifted_min:
            if (shift_->kind() == ScalarDistribution::Kind::deterministic) {
                const double x = t - shift_->value();
                if (x < 0.0) return 0.0;
                return tau_.survival_left(x) * eta_->density(x);
            }
            return std::nullopt;
    }
    return std::nullopt;
}

StepMoments JointStepLaw::moments() const {
    StepMoments m{};
    m.q = q_;
    switch (coupling_) {
        case Coupling::independent: {
            m.a = tau_.mean();
            m.sigma2 = tau_.variance();
            m.a0 = (1.0 - q_) * m.a;
            break;
        }
        case Coupling::min_threshold:
        case Coupling::shifted_min: {
            const double cutoff = std::min(tau_.tail_cutoff(), eta_->tail_cutoff());
            std::vector<double> cuts = tau_.breakpoints();
            {
                auto eb = eta_->breakpoints();
                cuts.insert(cuts.end(), eb.begin(), eb.end());
            }
            auto surv = [&](double x) { return tau_.survival(x) * eta_->survival(x); };
            const double a_min = detail::integrate(surv, 0.0, cutoff, cuts);
            const double m2_min =
                2.0 * detail::integrate([&](double x) { return x * surv(x); }, 0.0, cutoff, cuts);
            const double a0_min = detail::integrate_df(
                *eta_, [&](double x) { return x * tau_.survival_left(x); }, kInf,
                detail::RightEnd::closed, tau_.breakpoints());
            m.a = a_min;
            m.sigma2 = std::max(0.0, m2_min - a_min * a_min);
            m.a0 = a0_min;
            if (coupling_ == Coupling::shifted_min) {
                m.a += shift_->mean();
                m.sigma2 += shift_->variance();
                m.a0 += (1.0 - q_) * shift_->mean();
            }
            break;
        }
        case Coupling::race_step: {
            m.a = tau_.mean();
            m.sigma2 = tau_.variance();
            m.a0 = detail::integrate_df(
                tau_, [&](double x) { return x * eta_->cdf(x); }, kInf, detail::RightEnd::closed,
                eta_->breakpoints());
            break;
        }
    }
    m.validate();
    return m;
}

StepDraw JointStepLaw::sample(Rng& rng) const {
    switch (coupling_) {
        case Coupling::independent: {
            const double z = tau_.sample(rng);
            return {z, rng.bernoulli(q_) ? 1 : 0};
        }
        case Coupling::min_threshold: {
            const double t = tau_.sample(rng);
            const double e = eta_->sample(rng);
            return {std::min(t, e), t < e ? 1 : 0};
        }
        case Coupling::race_step: {
            const double t = tau_.sample(rng);
            const double e = eta_->sample(rng);
            return {t, t < e ? 1 : 0};
        }
        case Coupling::shifted_min: {
            const double t = tau_.sample(rng);
            const double e = eta_->sample(rng);
            const double s = shift_->sample(rng);
            return {std::min(t, e) + s, t < e ? 1 : 0};
        }
    }
    return {0.0, 0};
}

double JointStepLaw::tail_cutoff(double eps) const {
    switch (coupling_) {
        case Coupling::independent: return tau_.tail_cutoff(eps);
        case Coupling::min_threshold:
            return std::min(tau_.tail_cutoff(eps), eta_->tail_cutoff(eps));
        case Coupling::race_step: return tau_.tail_cutoff(eps);
        case Coupling::shifted_min:
            return std::min(tau_.tail_cutoff(eps), eta_->tail_cutoff(eps)) +
                   shift_->tail_cutoff(eps);
    }
    return kInf;
}

} // namespace randsum
