#include <benchmark/benchmark.h>

#include "histwalk/analysis.hpp"
#include "histwalk/classical_walk.hpp"
#include "histwalk/coined_walk.hpp"
#include "histwalk/memory_mixing.hpp"
#include "histwalk/oscillator_walk.hpp"

#include <cmath>

using namespace histwalk;

namespace {

WalkConfig open_config(int T) {
    WalkConfig cfg;
    cfg.T = T;
    cfg.L = T + 2;
    cfg.boundary = Boundary::none_reachable;
    return cfg;
}

void bench_pure_walk(benchmark::State& state) {
    WalkConfig cfg = open_config(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(evolve_pure(cfg));
    }
}

void bench_model_a(benchmark::State& state) {
    const WalkConfig cfg = open_config(static_cast<int>(state.range(0)));
    const MixingWeights w{{0.5, 0.5}};
    for (auto _ : state) {
        benchmark::DoNotOptimize(model_a_final(w, cfg));
    }
}

void bench_model_b(benchmark::State& state) {
    const WalkConfig cfg = open_config(static_cast<int>(state.range(0)));
    const MixingWeights w{{0.5, 0.5}};
    const std::vector<WalkConfig> cfgs{cfg, cfg};
    for (auto _ : state) {
        benchmark::DoNotOptimize(model_b_final(w, cfgs));
    }
}

void bench_oscillator(benchmark::State& state) {
    WalkConfig cfg;
    cfg.T = static_cast<int>(state.range(0));
    cfg.L = cfg.T + 15;
    OscillatorParams params;
    params.omega = 5.0;
    params.lambda = 0.1;
    params.n_max = 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_oscillator_walk(params, cfg));
    }
}

void bench_memory_crw(benchmark::State& state) {
    CrwConfig cfg;
    cfg.T = 60;
    cfg.L = 60;
    cfg.reps = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_memory_crw(cfg, 1));
    }
}

void bench_power_law_fit(benchmark::State& state) {
    TimeSeries corr;
    corr.values.push_back(9.0);
    for (int tau = 1; tau <= 60; ++tau)
        corr.values.push_back(0.4 + 3.0 * std::pow(double(tau), -1.15));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_power_law(corr));
    }
}

BENCHMARK(bench_pure_walk)->Arg(60)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_model_a)->Arg(60)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_model_b)->Arg(60)->Arg(100)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_oscillator)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_memory_crw)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(bench_power_law_fit)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
