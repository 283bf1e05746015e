#include <benchmark/benchmark.h>

#include <cmath>

#include "levyflow/frac_laplacian.hpp"
#include "levyflow/macro_sim.hpp"
#include "levyflow/micro_sim.hpp"
#include "levyflow/rng.hpp"

using namespace levyflow;

static void BM_Philox(benchmark::State& state) {
    RngStream rng(1, 0);
    double acc = 0.0;
    for (auto _ : state) acc += rng.uniform();
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_Philox);

static void BM_FracApply(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    const Grid g = Grid::plane(1.0, 1.0, M, M);
    const FracLapOperator op(g, 1.5);
    GridField u(g);
    for (int j = 0; j < M; ++j)
        for (int k = 0; k < M; ++k) u.at(k, j) = std::sin(6.28 * g.x(k)) * std::cos(6.28 * g.y(j));
    for (auto _ : state) benchmark::DoNotOptimize(op.apply(u));
}
BENCHMARK(BM_FracApply)->Arg(21)->Arg(64);

static void BM_FracAssemble(benchmark::State& state) {
    const int M = static_cast<int>(state.range(0));
    const FracLapOperator op(Grid::plane(1.0, 1.0, M, M), 1.5);
    for (auto _ : state) benchmark::DoNotOptimize(op.assemble());
}
BENCHMARK(BM_FracAssemble)->Arg(21)->Arg(32);

static void BM_MacroStep(benchmark::State& state) {
    const MacroConfig cfg;
    const MacroState init = initial_macro_state(cfg);
    RngStream rng(1, 0);
    MacroDiagnostics diag;
    for (auto _ : state) {
        MacroState s = init;
        macro_step(s, cfg, rng, diag);
        benchmark::DoNotOptimize(s.H);
    }
}
BENCHMARK(BM_MacroStep)->Unit(benchmark::kMillisecond);

static void BM_MicroRun(benchmark::State& state) {
    MicroConfig cfg;
    cfg.M = static_cast<int>(state.range(0));
    cfg.steps = 5;
    std::uint64_t sample = 0;
    for (auto _ : state) benchmark::DoNotOptimize(run_micro(cfg, 1, sample++));
}
BENCHMARK(BM_MicroRun)->Arg(400)->Arg(2500)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
