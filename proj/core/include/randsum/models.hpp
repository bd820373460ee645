#pragma once

#include <cmath>

#include "randsum/scalar_distribution.hpp"
#include "randsum/step_law.hpp"
#include "randsum/volterra.hpp"

namespace randsum {

/// Survival of an exponential law, P(X > t) = exp(-rate t).
struct ExponentialSurvival {
    double rate;
    double operator()(double t) const { return std::exp(-rate * t); }
    double cdf(double t) const { return t < 0.0 ? 0.0 : -std::expm1(-rate * t); }
};

/// Law with an atom at zero and an exponential tail:
/// P(X = 0) = atom_mass, P(X > t) = (1 - atom_mass) exp(-tail_rate t).
struct MixedExponential {
    double atom_mass;
    double tail_rate;
    double survival(double t) const {
        return t < 0.0 ? 1.0 : (1.0 - atom_mass) * std::exp(-tail_rate * t);
    }
};

/*
 * Particle counter that registers an arrival only while free and then locks
 * for a random duration; arrivals during the lock are lost and do not extend
 * it. Arrivals form a Poisson flow of rate lambda, the lock duration follows
 * `lock`. The tracked quantity is the time until the first lost arrival.
 */
struct GeigerModel {
    double lambda;
    ScalarDistribution lock;

    JointStepLaw step_law() const {
        return JointStepLaw::race_step(ScalarDistribution::exponential(lambda), lock);
    }
};

struct GeigerCharacteristics {
    double q;      // chance an arrival gap ends inside the lock
    double mean_T; // 1 / (lambda q)
    double var_T;  // (2 (q + lambda a0) - 1) / (lambda q)^2
    SurvivalCurve survival;
};

GeigerCharacteristics geiger_characteristics(const GeigerModel& m, double t_max, double h);

/*
 * Duplicated repairable system: an operating unit (failure rate lambda), one
 * standby in a partially energized state (failure rate lambda_prime while
 * waiting), a single repair channel with repair law `repair`. Busy period =
 * maximal interval with at least one working unit; the first one starts with
 * both units up, later ones start with one unit up and the other in repair.
 */
struct RedundantModel {
    double lambda;
    double lambda_prime;
    ScalarDistribution repair;

    /// Distributional representation of the first busy period as a stopped
    /// random sum: each step is min(life, repair) plus an independent
    /// exponential(lambda + lambda_prime) stretch with both units up.
    JointStepLaw busy_period_law() const {
        return JointStepLaw::shifted_min(
            ScalarDistribution::exponential(lambda), repair,
            ScalarDistribution::exponential(lambda + lambda_prime));
    }
};

struct RedundantCharacteristics {
    double q;
    double mean_w1, mean_wk; // first / subsequent busy periods
    double var_w1, var_wk;
    ExponentialSurvival alpha0_survival; // time with both units up, rate (lam+lam')q
    ExponentialSurvival alpha1_survival; // time with one unit in repair, rate lam
};

RedundantCharacteristics redundant_characteristics(const RedundantModel& m);

/*
 * Single-server FIFO queue with Poisson(lambda) arrivals and service law
 * `service`; regeneration cycles run between successive transitions from two
 * customers to one. Requires rho = lambda E[service] < 1.
 */
struct SsqsModel {
    double lambda;
    ScalarDistribution service;
};

struct SsqsCharacteristics {
    double q;   // P(next arrival beats the running service)
    double b;   // mean service time
    double rho; // lambda * b
    double p0, p1;
    double mean_alpha0, mean_alpha1, mean_alpha;
    double mean_T, mean_beta;
    MixedExponential alpha0_law;       // atom q at 0, tail rate lambda q
    ExponentialSurvival alpha1_law;    // rate lambda
};

SsqsCharacteristics ssqs_characteristics(const SsqsModel& m);

} // namespace randsum
