#include "randsum/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "randsum/rng.hpp"

namespace randsum {

namespace {

constexpr unsigned kChunks = 64;

/*
 * Runs body(chunk_index, first_rep, last_rep) over fixed chunk boundaries.
 * The chunk layout depends only on n, never on the thread count, so callers
 * that merge per-chunk state in index order get identical results on any
 * machine load.
 */
template <typename Body>
void run_chunked(std::uint64_t n, Body&& body) {
    const unsigned chunks = kChunks;
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min(hw, chunks);
    std::atomic<unsigned> next{0};
    std::vector<std::exception_ptr> errors(chunks);

    auto worker = [&]() {
        for (;;) {
            const unsigned c = next.fetch_add(1);
            if (c >= chunks) return;
            const std::uint64_t first = n * c / chunks;
            const std::uint64_t last = n * (c + 1) / chunks;
            try {
                body(c, first, last);
            } catch (...) {
                errors[c] = std::current_exception();
            }
        }
    };

    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct CurveHistogram {
    std::vector<std::uint64_t> counts; // cell i = [i h, (i+1) h), last = overflow

    explicit CurveHistogram(std::size_t cells) : counts(cells + 1, 0) {}

    void add(double x, double h) {
        const auto cell = static_cast<std::size_t>(x / h);
        counts[std::min(cell, counts.size() - 1)] += 1;
    }

    void merge(const CurveHistogram& o) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.counts[i];
    }
};

SurvivalCurve histogram_to_curve(const CurveHistogram& hist, double h, std::uint64_t n) {
    SurvivalCurve curve;
    curve.h = h;
    curve.values.resize(hist.counts.size());
    std::uint64_t tail = 0;
    for (std::size_t i = hist.counts.size(); i-- > 0;) {
        tail += hist.counts[i];
        curve.values[i] = static_cast<double>(tail) / static_cast<double>(n);
    }
    return curve;
}

std::size_t curve_cells(const SimOptions& opts) {
    if (!(opts.curve_h > 0.0) || !(opts.curve_t_max > opts.curve_h))
        throw ValidationError("SimOptions: curve grid must satisfy 0 < h < t_max");
    return static_cast<std::size_t>(std::llround(opts.curve_t_max / opts.curve_h));
}

void fill_report(SimReport& r, const RunningStats& stats, const CurveHistogram& hist,
                 const SimOptions& opts, std::uint64_t n, std::uint64_t seed) {
    r.n = n;
    r.seed = seed;
    r.mean = stats.mean();
    r.variance = stats.variance();
    r.std_err_mean = stats.std_err_mean();
    r.std_err_variance = stats.std_err_variance();
    r.empirical_survival = histogram_to_curve(hist, opts.curve_h, n);
}

[[noreturn]] void throw_runaway(std::uint64_t cap) {
    throw RunawayStop("replication exceeded " + std::to_string(cap) +
                      " steps; the stopping probability is effectively zero");
}

} // namespace

RandomSumSimResult simulate_random_sum(const JointStepLaw& law, std::uint64_t n,
                                       std::uint64_t seed, const SimOptions& opts) {
    if (n < 1) throw ValidationError("simulate_random_sum: n must be >= 1");
    const std::size_t cells = curve_cells(opts);
    constexpr std::size_t kNuCells = 256;

    struct Chunk {
        RunningStats sum_stats, nu_stats;
        CurveHistogram hist;
        std::vector<std::uint64_t> nu_counts;
        std::vector<double> samples;
        explicit Chunk(std::size_t c) : hist(c), nu_counts(kNuCells + 1, 0) {}
    };
    std::vector<Chunk> chunks(kChunks, Chunk(cells));

    run_chunked(n, [&](unsigned c, std::uint64_t first, std::uint64_t last) {
        Chunk& ch = chunks[c];
        for (std::uint64_t i = first; i < last; ++i) {
            Rng rng = Rng::stream(seed, i);
            double sum = 0.0;
            std::uint64_t steps = 0;
            for (;;) {
                const StepDraw d = law.sample(rng);
                sum += d.zeta;
                ++steps;
                if (d.eps == 1) break;
                if (steps >= opts.max_steps) throw_runaway(opts.max_steps);
            }
            ch.sum_stats.add(sum);
            ch.nu_stats.add(static_cast<double>(steps));
            ch.hist.add(sum, opts.curve_h);
            ch.nu_counts[std::min<std::uint64_t>(steps - 1, kNuCells)] += 1;
            if (opts.keep_samples) ch.samples.push_back(sum);
        }
    });

    RunningStats stats, nu_stats;
    CurveHistogram hist(cells);
    RandomSumSimResult out;
    out.nu_counts.assign(kNuCells + 1, 0);
    for (const Chunk& ch : chunks) {
        stats.merge(ch.sum_stats);
        nu_stats.merge(ch.nu_stats);
        hist.merge(ch.hist);
        for (std::size_t k = 0; k < out.nu_counts.size(); ++k)
            out.nu_counts[k] += ch.nu_counts[k];
    }
    fill_report(out.report, stats, hist, opts, n, seed);
    out.report.extra_scalars["mean_nu"] = nu_stats.mean();
    out.report.extra_scalars["var_nu"] = nu_stats.variance();
    out.report.extra_scalars["std_err_mean_nu"] = nu_stats.std_err_mean();
    if (opts.keep_samples) {
        out.report.samples.reserve(n);
        for (Chunk& ch : chunks) {
            out.report.samples.insert(out.report.samples.end(), ch.samples.begin(),
                                      ch.samples.end());
            ch.samples.clear();
        }
    }
    return out;
}

SimReport simulate_geiger(const GeigerModel& m, std::uint64_t n, std::uint64_t seed,
                          const SimOptions& opts) {
    if (n < 1) throw ValidationError("simulate_geiger: n must be >= 1");
    if (!(m.lambda > 0.0)) throw ValidationError("simulate_geiger: lambda must be > 0");
    const std::size_t cells = curve_cells(opts);

    struct Chunk {
        RunningStats stats;
        CurveHistogram hist;
        std::vector<double> samples;
        explicit Chunk(std::size_t c) : hist(c) {}
    };
    std::vector<Chunk> chunks(kChunks, Chunk(cells));

    run_chunked(n, [&](unsigned c, std::uint64_t first, std::uint64_t last) {
        Chunk& ch = chunks[c];
        for (std::uint64_t i = first; i < last; ++i) {
            Rng rng = Rng::stream(seed, i);
            // A registration at `t` locks the counter until t + lock; the next
            // arrival comes at t + gap and is lost if it lands inside the lock.
            double t = 0.0;
            std::uint64_t steps = 0;
            for (;;) {
                const double lock_until = t + m.lock.sample(rng);
                const double arrival = t + rng.exponential(m.lambda);
                ++steps;
                if (arrival < lock_until) {
                    t = arrival; // first lost arrival; the clock stops here
                    break;
                }
                t = arrival;
                if (steps >= opts.max_steps) throw_runaway(opts.max_steps);
            }
            ch.stats.add(t);
            ch.hist.add(t, opts.curve_h);
            if (opts.keep_samples) ch.samples.push_back(t);
        }
    });

    RunningStats stats;
    CurveHistogram hist(cells);
    SimReport report;
    for (const Chunk& ch : chunks) {
        stats.merge(ch.stats);
        hist.merge(ch.hist);
    }
    fill_report(report, stats, hist, opts, n, seed);
    if (opts.keep_samples) {
        report.samples.reserve(n);
        for (Chunk& ch : chunks)
            report.samples.insert(report.samples.end(), ch.samples.begin(), ch.samples.end());
    }
    return report;
}

RedundantSimResult simulate_redundant(const RedundantModel& m, std::uint64_t n,
                                      std::uint64_t seed, const SimOptions& opts) {
    if (n < 1) throw ValidationError("simulate_redundant: n must be >= 1");
    if (!(m.lambda > 0.0) || !(m.lambda_prime >= 0.0))
        throw ValidationError("simulate_redundant: bad rates");
    const std::size_t cells = curve_cells(opts);
    const double lam = m.lambda;
    const double lam_sum = m.lambda + m.lambda_prime;

    struct Chunk {
        RunningStats w1_stats, wk_stats;
        CurveHistogram w1_hist, wk_hist;
        std::vector<double> w1, wk, alpha0, alpha1;
        explicit Chunk(std::size_t c) : w1_hist(c), wk_hist(c) {}
    };
    std::vector<Chunk> chunks(kChunks, Chunk(cells));

    run_chunked(n, [&](unsigned c, std::uint64_t first, std::uint64_t last) {
        Chunk& ch = chunks[c];
        for (std::uint64_t i = first; i < last; ++i) {
            Rng rng = Rng::stream(seed, i);
            // First busy period: both units up. Alternate a state-0 stretch
            // (either unit failing, combined rate lam + lam') with a state-1
            // race between the operating unit and the running repair.
            double alpha0 = 0.0, alpha1 = 0.0;
            std::uint64_t steps = 0;
            for (;;) {
                alpha0 += rng.exponential(lam_sum);
                const double repair = m.repair.sample(rng);
                const double life = rng.exponential(lam);
                alpha1 += std::min(life, repair);
                if (life < repair) break; // second failure: system down
                if (++steps >= opts.max_steps) throw_runaway(opts.max_steps);
            }
            const double w1 = alpha0 + alpha1;
            // A later busy period: opens at a repair completion while the
            // other unit waits, i.e. in state 1 with a fresh repair running.
            double wk = 0.0;
            for (;;) {
                const double repair = m.repair.sample(rng);
                const double life = rng.exponential(lam);
                wk += std::min(life, repair);
                if (life < repair) break;
                wk += rng.exponential(lam_sum);
                if (++steps >= opts.max_steps) throw_runaway(opts.max_steps);
            }
            ch.w1_stats.add(w1);
            ch.wk_stats.add(wk);
            ch.w1_hist.add(w1, opts.curve_h);
            ch.wk_hist.add(wk, opts.curve_h);
            ch.alpha0.push_back(alpha0);
            ch.alpha1.push_back(alpha1);
            if (opts.keep_samples) {
                ch.w1.push_back(w1);
                ch.wk.push_back(wk);
            }
        }
    });

    RedundantSimResult out;
    RunningStats w1_stats, wk_stats;
    CurveHistogram w1_hist(cells), wk_hist(cells);
    out.alpha0.reserve(n);
    out.alpha1.reserve(n);
    for (Chunk& ch : chunks) {
        w1_stats.merge(ch.w1_stats);
        wk_stats.merge(ch.wk_stats);
        w1_hist.merge(ch.w1_hist);
        wk_hist.merge(ch.wk_hist);
        out.alpha0.insert(out.alpha0.end(), ch.alpha0.begin(), ch.alpha0.end());
        out.alpha1.insert(out.alpha1.end(), ch.alpha1.begin(), ch.alpha1.end());
        if (opts.keep_samples) {
            out.w1.samples.insert(out.w1.samples.end(), ch.w1.begin(), ch.w1.end());
            out.wk.samples.insert(out.wk.samples.end(), ch.wk.begin(), ch.wk.end());
        }
        ch.alpha0.clear();
        ch.alpha1.clear();
    }
    fill_report(out.w1, w1_stats, w1_hist, opts, n, seed);
    fill_report(out.wk, wk_stats, wk_hist, opts, n, seed);
    return out;
}

SsqsSimResult simulate_ssqs(const SsqsModel& m, std::uint64_t n, std::uint64_t seed,
                            const SimOptions& opts) {
    if (n < 1) throw ValidationError("simulate_ssqs: n must be >= 1");
    const double rho = m.lambda * m.service.mean();
    if (!(rho < 1.0))
        throw StabilityViolation("simulate_ssqs: rho = " + std::to_string(rho) + " >= 1");
    const std::size_t cells = curve_cells(opts);

    struct Chunk {
        RunningStats t_stats, alpha_stats, beta_stats, alpha0_stats, alpha1_stats;
        CurveHistogram hist;
        std::uint64_t alpha0_zero = 0;
        std::vector<double> t, alpha0, alpha1;
        explicit Chunk(std::size_t c) : hist(c) {}
    };
    std::vector<Chunk> chunks(kChunks, Chunk(cells));

    run_chunked(n, [&](unsigned c, std::uint64_t first, std::uint64_t last) {
        Chunk& ch = chunks[c];
        for (std::uint64_t i = first; i < last; ++i) {
            Rng rng = Rng::stream(seed, i);
            // Cycle opens with one customer starting service. Until the first
            // queue forms the system alternates service (state 1) and empty
            // (state 0) stretches; the residual to the pending arrival after
            // an early completion is the state-0 sojourn.
            double alpha0 = 0.0, alpha1 = 0.0;
            double residual_service = 0.0;
            std::uint64_t steps = 0;
            for (;;) {
                const double gap = rng.exponential(m.lambda);
                const double service = m.service.sample(rng);
                if (gap < service) {
                    alpha1 += gap;
                    residual_service = service - gap;
                    break; // a second customer arrived: queue begins
                }
                alpha1 += service;
                alpha0 += gap - service;
                if (++steps >= opts.max_steps) throw_runaway(opts.max_steps);
            }
            const double alpha = alpha0 + alpha1;
            // Queued phase: two or more customers until a departure leaves one.
            double beta = 0.0;
            double to_departure = residual_service;
            double to_arrival = rng.exponential(m.lambda);
            std::uint64_t in_system = 2;
            for (;;) {
                if (to_arrival < to_departure) {
                    beta += to_arrival;
                    to_departure -= to_arrival;
                    to_arrival = rng.exponential(m.lambda);
                    ++in_system;
                } else {
                    beta += to_departure;
                    to_arrival -= to_departure;
                    --in_system;
                    if (in_system == 1) break; // cycle ends at this departure
                    to_departure = m.service.sample(rng);
                }
                if (++steps >= opts.max_steps) throw_runaway(opts.max_steps);
            }
            const double cycle_T = alpha + beta;
            ch.t_stats.add(cycle_T);
            ch.alpha_stats.add(alpha);
            ch.beta_stats.add(beta);
            ch.alpha0_stats.add(alpha0);
            ch.alpha1_stats.add(alpha1);
            ch.hist.add(cycle_T, opts.curve_h);
            if (alpha0 == 0.0) ++ch.alpha0_zero;
            ch.alpha0.push_back(alpha0);
            ch.alpha1.push_back(alpha1);
            if (opts.keep_samples) ch.t.push_back(cycle_T);
        }
    });

    SsqsSimResult out;
    RunningStats t_stats, alpha_stats, beta_stats, alpha0_stats, alpha1_stats;
    CurveHistogram hist(cells);
    std::uint64_t alpha0_zero = 0;
    out.alpha0.reserve(n);
    out.alpha1.reserve(n);
    for (Chunk& ch : chunks) {
        t_stats.merge(ch.t_stats);
        alpha_stats.merge(ch.alpha_stats);
        beta_stats.merge(ch.beta_stats);
        alpha0_stats.merge(ch.alpha0_stats);
        alpha1_stats.merge(ch.alpha1_stats);
        hist.merge(ch.hist);
        alpha0_zero += ch.alpha0_zero;
        out.alpha0.insert(out.alpha0.end(), ch.alpha0.begin(), ch.alpha0.end());
        out.alpha1.insert(out.alpha1.end(), ch.alpha1.begin(), ch.alpha1.end());
        if (opts.keep_samples)
            out.cycle.samples.insert(out.cycle.samples.end(), ch.t.begin(), ch.t.end());
        ch.alpha0.clear();
        ch.alpha1.clear();
    }
    fill_report(out.cycle, t_stats, hist, opts, n, seed);
    auto put = [&](const std::string& name, const RunningStats& s) {
        out.cycle.extra_scalars["mean_" + name] = s.mean();
        out.cycle.extra_scalars["std_err_mean_" + name] = s.std_err_mean();
    };
    put("alpha", alpha_stats);
    put("beta", beta_stats);
    put("alpha0", alpha0_stats);
    put("alpha1", alpha1_stats);
    const double nn = static_cast<double>(n);
    const double p_zero = static_cast<double>(alpha0_zero) / nn;
    out.cycle.extra_scalars["p_alpha0_zero"] = p_zero;
    out.cycle.extra_scalars["std_err_p_alpha0_zero"] =
        std::sqrt(std::max(0.0, p_zero * (1.0 - p_zero) / nn));
    out.cycle.extra_scalars["frac_time_state0"] = alpha0_stats.s1 / t_stats.s1;
    out.cycle.extra_scalars["frac_time_state1"] = alpha1_stats.s1 / t_stats.s1;
    return out;
}

ComparisonVerdict compare_reports(const SimReport& sim, const AnalyticSummary& analytic,
                                  double z_limit, double ks_alpha) {
    ComparisonVerdict v{};
    if (sim.n == 0 || sim.std_err_mean <= 0.0)
        throw ValidationError("compare_reports: report lacks usable statistics");
    v.z_mean = (sim.mean - analytic.mean) / sim.std_err_mean;
    bool pass = std::abs(v.z_mean) <= z_limit;
    std::string detail;
    if (std::abs(v.z_mean) > z_limit)
        detail += "mean off by " + std::to_string(v.z_mean) + " standard errors; ";

    if (analytic.variance) {
        if (sim.std_err_variance <= 0.0)
            throw ValidationError("compare_reports: report lacks a variance standard error");
        v.z_variance = (sim.variance - *analytic.variance) / sim.std_err_variance;
        if (std::abs(*v.z_variance) > z_limit) {
            pass = false;
            detail += "variance off by " + std::to_string(*v.z_variance) + " standard errors; ";
        }
    }

    if (analytic.survival) {
        const SurvivalCurve& ref = *analytic.survival;
        if (!sim.samples.empty()) {
            v.ks = ks_test(sim.samples, [&ref](double t) { return ref.cdf(t); }, ks_alpha);
        } else {
            const SurvivalCurve& emp = sim.empirical_survival;
            if (std::abs(emp.h - ref.h) > 1e-12 || emp.values.size() > ref.values.size())
                throw ShapeMismatch("compare_reports: empirical and analytic grids differ");
            double d = 0.0;
            for (std::size_t i = 0; i < emp.values.size(); ++i)
                d = std::max(d, std::abs(emp.values[i] - ref.values[i]));
            v.ks = KsResult{d, ks_critical_value(sim.n, ks_alpha), d <= ks_critical_value(sim.n, ks_alpha)};
        }
        if (!v.ks->pass) {
            pass = false;
            detail += "KS statistic " + std::to_string(v.ks->statistic) + " exceeds " +
                      std::to_string(v.ks->critical) + "; ";
        }
    }
    v.pass = pass;
    v.detail = pass ? "PASS" : detail;
    return v;
}

} // namespace randsum
