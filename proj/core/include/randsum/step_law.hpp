#pragma once

#include <optional>
#include <vector>

#include "randsum/rng.hpp"
#include "randsum/scalar_distribution.hpp"

namespace randsum {

/// First and second moments of one step, split by the stopping indicator.
struct StepMoments {
    double a;      // E zeta
    double sigma2; // Var zeta
    double a0;     // E[zeta * I(eps = 0)]
    double q;      // P(eps = 1)

    void validate() const;
};

/// One evaluation of the sub-distribution functions: f0 + f1 = f.
struct SubCdfs {
    double f0; // P(zeta op t, eps = 0)   where op is <= (right) or < (left)
    double f1; // P(zeta op t, eps = 1)
    double f;  // P(zeta op t)
};

/// One sampled step.
struct StepDraw {
    double zeta;
    int eps; // 0 or 1
};

/*
 * Joint law of a single step (zeta, eps): the summand and the stopping
 * indicator, possibly dependent. Four couplings:
 *
 *   independent(zeta, q)            eps ~ Bernoulli(q), independent of zeta
 *   min_threshold(tau, eta)         zeta = min(tau, eta), eps = I(tau < eta)
 *   race_step(tau, eta)             zeta = tau,           eps = I(tau < eta)
 *   shifted_min(tau, eta, shift)    zeta = min(tau, eta) + shift,
 *                                   eps = I(tau < eta), shift independent
 *
 * Ties tau = eta count as eps = 0 (the indicator is strictly tau < eta).
 * Construction validates 0 < q < 1 and P(zeta = 0) < 1.
 */
class JointStepLaw {
  public:
    enum class Coupling { independent, min_threshold, race_step, shifted_min };

    static JointStepLaw independent(ScalarDistribution zeta, double q);
    static JointStepLaw min_threshold(ScalarDistribution tau, ScalarDistribution eta);
    static JointStepLaw race_step(ScalarDistribution tau, ScalarDistribution eta);
    static JointStepLaw shifted_min(ScalarDistribution tau, ScalarDistribution eta,
                                    ScalarDistribution shift);

    Coupling coupling() const { return coupling_; }

    /// P(eps = 1); exact where a closed form exists, quadrature otherwise.
    double q() const { return q_; }

    /// Right-continuous sub-CDFs at t: P(zeta <= t, eps = .).
    SubCdfs sub_cdfs(double t) const;
    /// Left-limit variants: P(zeta < t, eps = .).
    SubCdfs sub_cdfs_left(double t) const;

    /// Atoms of F0 / F1 (finitely many for the supported kinds).
    std::vector<PointMass> sub_atoms0() const;
    std::vector<PointMass> sub_atoms1() const;

    /// Density of the continuous part of F0; nullopt when no direct form
    /// exists (shifted_min with a continuous shift needs a convolution).
    std::optional<double> sub_density0(double t) const;

    StepMoments moments() const;

    StepDraw sample(Rng& rng) const;

    /// Scale used to size grids and integration cutoffs.
    double tail_cutoff(double eps = 1e-18) const;

    // Component access (used by the transform layer and serialization).
    const ScalarDistribution& zeta_component() const { return tau_; } // independent coupling
    const ScalarDistribution& tau() const { return tau_; }
    const ScalarDistribution& eta() const { return *eta_; }
    const ScalarDistribution& shift() const { return *shift_; }
    bool has_eta() const { return eta_.has_value(); }
    bool has_shift() const { return shift_.has_value(); }

  private:
    JointStepLaw(Coupling c, ScalarDistribution tau, std::optional<ScalarDistribution> eta,
                 std::optional<ScalarDistribution> shift, std::optional<double> stored_q);

    double compute_q() const;
    SubCdfs min_sub_cdfs(double t, bool left) const; // min_threshold core
    void validate() const;

    Coupling coupling_;
    ScalarDistribution tau_; // zeta for the independent coupling
    std::optional<ScalarDistribution> eta_;
    std::optional<ScalarDistribution> shift_;
    double q_;
};

/// P(eps = 1) of the law (stored at construction).
inline double q_of(const JointStepLaw& law) { return law.q(); }

/// Moments of one step; see StepMoments.
inline StepMoments step_moments(const JointStepLaw& law) { return law.moments(); }

/// One draw of (zeta, eps).
inline StepDraw sample_step(const JointStepLaw& law, Rng& rng) { return law.sample(rng); }

/// Sub-CDF triple at t (right-continuous convention).
inline SubCdfs sub_cdfs(const JointStepLaw& law, double t) { return law.sub_cdfs(t); }

} // namespace randsum
