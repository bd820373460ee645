#include <benchmark/benchmark.h>

#include <cmath>

#include "randsum/analytic.hpp"
#include "randsum/simulate.hpp"
#include "randsum/volterra.hpp"

using namespace randsum;

namespace {
using SD = ScalarDistribution;

JointStepLaw counter_law() {
    return JointStepLaw::race_step(SD::exponential(1.0), SD::exponential(2.0));
}

void BM_StepSample(benchmark::State& state) {
    const JointStepLaw law = counter_law();
    Rng rng(1);
    for (auto _ : state) benchmark::DoNotOptimize(law.sample(rng).zeta);
}
BENCHMARK(BM_StepSample);

void BM_SolveSurvival(benchmark::State& state) {
    const JointStepLaw law = counter_law();
    const double h = 10.0 / static_cast<double>(state.range(0));
    for (auto _ : state) {
        const SurvivalCurve c = solve_survival(law, 10.0, h);
        benchmark::DoNotOptimize(c.values.back());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveSurvival)->Arg(250)->Arg(500)->Arg(1000)->Arg(2000)->Complexity();

void BM_GaverStehfest(benchmark::State& state) {
    const LaplaceTransforms lt = laplace_transforms(counter_law());
    const int order = static_cast<int>(state.range(0));
    double t = 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            gaver_stehfest([&lt](double z) { return lt.phi(z) / z; }, t, order));
        t = t < 10.0 ? t + 0.1 : 0.1;
    }
}
BENCHMARK(BM_GaverStehfest)->Arg(8)->Arg(12)->Arg(16);

void BM_SimulateRandomSum(benchmark::State& state) {
    const JointStepLaw law = counter_law();
    SimOptions opts;
    opts.keep_samples = false;
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        const RandomSumSimResult r = simulate_random_sum(law, n, 7, opts);
        benchmark::DoNotOptimize(r.report.mean);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SimulateRandomSum)->Arg(10'000)->Arg(100'000);

void BM_SimulateSsqsCycles(benchmark::State& state) {
    const SsqsModel model{1.0, SD::exponential(2.0)};
    SimOptions opts;
    opts.keep_samples = false;
    const auto n = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        const SsqsSimResult r = simulate_ssqs(model, n, 7, opts);
        benchmark::DoNotOptimize(r.cycle.mean);
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(n));
}
BENCHMARK(BM_SimulateSsqsCycles)->Arg(10'000)->Arg(100'000);

} // namespace

BENCHMARK_MAIN();
