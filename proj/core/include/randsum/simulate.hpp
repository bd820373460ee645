#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "randsum/models.hpp"
#include "randsum/stats.hpp"
#include "randsum/step_law.hpp"
#include "randsum/volterra.hpp"

namespace randsum {

struct SimOptions {
    double curve_t_max = 50.0; ///< grid of the empirical survival curve
    double curve_h = 0.05;
    std::uint64_t max_steps = 1'000'000'000; ///< per-replication cap; RunawayStop beyond
    bool keep_samples = true;                ///< retain raw primary samples in the report
};

/*
 * Summary of one replicated experiment. Replications are independent streams
 * derived from (seed, replication index); accumulation is chunked with fixed
 * chunk boundaries and merged in chunk order, so a report is reproducible
 * bit-for-bit from (model, n, seed) on one build regardless of thread count.
 */
struct SimReport {
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_err_mean = 0.0;
    double std_err_variance = 0.0;
    SurvivalCurve empirical_survival;
    std::map<std::string, double> extra_scalars;
    std::vector<double> samples; ///< raw primary samples (empty if not kept)
};

struct RandomSumSimResult {
    SimReport report;
    /// nu_counts[k] = number of replications stopping at step k+1; the last
    /// entry aggregates everything beyond.
    std::vector<std::uint64_t> nu_counts;
};

/// n replications of the stopped sum: draw steps until the indicator fires.
RandomSumSimResult simulate_random_sum(const JointStepLaw& law, std::uint64_t n,
                                       std::uint64_t seed, const SimOptions& opts = {});

/// Arrival-by-arrival runs of the counter; the sample is the time of the
/// first lost arrival.
SimReport simulate_geiger(const GeigerModel& m, std::uint64_t n, std::uint64_t seed,
                          const SimOptions& opts = {});

struct RedundantSimResult {
    SimReport w1; ///< first busy period (starts with both units up)
    SimReport wk; ///< a subsequent busy period (starts with one unit in repair)
    std::vector<double> alpha0; ///< first-period time with both units up
    std::vector<double> alpha1; ///< first-period time with one unit in repair
};

/// Event-driven two-unit system with one repair channel and light standby;
/// n replications, each yielding the first and one subsequent busy period.
RedundantSimResult simulate_redundant(const RedundantModel& m, std::uint64_t n,
                                      std::uint64_t seed, const SimOptions& opts = {});

struct SsqsSimResult {
    SimReport cycle; ///< per-cycle duration T; means of the sojourn pieces and
                     ///< long-run state fractions live in extra_scalars
    std::vector<double> alpha0; ///< per-cycle time in the empty state
    std::vector<double> alpha1; ///< per-cycle time with exactly one customer
};

/// Event-driven FIFO queue; n regeneration cycles (each cycle starts with one
/// customer beginning service, which makes cycles independent replications).
SsqsSimResult simulate_ssqs(const SsqsModel& m, std::uint64_t n, std::uint64_t seed,
                            const SimOptions& opts = {});

struct AnalyticSummary {
    double mean = 0.0;
    std::optional<double> variance;
    std::optional<SurvivalCurve> survival;
};

struct ComparisonVerdict {
    bool pass = false;
    double z_mean = 0.0;
    std::optional<double> z_variance;
    std::optional<KsResult> ks;
    std::string detail;
};

/*
 * Z-scores of the simulated mean/variance against the analytic values and a
 * KS test of the sample against the analytic survival (when provided). The
 * KS test uses raw samples when the report kept them; otherwise the
 * empirical and analytic curves must share a grid (ShapeMismatch if not) and
 * the statistic is the sup deviation over the nodes.
 */
ComparisonVerdict compare_reports(const SimReport& sim, const AnalyticSummary& analytic,
                                  double z_limit = 4.0, double ks_alpha = 0.01);

} // namespace randsum
