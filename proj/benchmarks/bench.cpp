#include <benchmark/benchmark.h>

#include <vector>

#include "gseq/boundaries.hpp"
#include "gseq/mcengine.hpp"
#include "gseq/normal.hpp"
#include "gseq/rng.hpp"
#include "gseq/subdensity.hpp"

namespace {

using namespace gseq;

void BM_NormalQuantile(benchmark::State& state) {
    double p = 0.12345;
    for (auto _ : state) {
        benchmark::DoNotOptimize(normal_quantile(p));
        p += 1e-7;
        if (p >= 1.0) p -= 0.999999;
    }
}
BENCHMARK(BM_NormalQuantile);

void BM_NormalCdf(benchmark::State& state) {
    double x = -8.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(normal_cdf(x));
        x += 1e-6;
        if (x > 8.0) x = -8.0;
    }
}
BENCHMARK(BM_NormalCdf);

void BM_ComputeAnatomy(benchmark::State& state) {
    const auto stages = static_cast<std::size_t>(state.range(0));
    const auto points = static_cast<std::size_t>(state.range(1));
    SequentialDesign d;
    d.num_stages = stages;
    d.stage_n.assign(stages, 1);
    d.boundaries.assign(stages, 2.3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(compute_anatomy(d, 0.4, points));
    }
    state.SetLabel(std::to_string(stages) + " stages, " + std::to_string(points) +
                   " points");
}
BENCHMARK(BM_ComputeAnatomy)->Args({2, 513})->Args({2, 1025})->Args({4, 1025})->Args({6, 1025});

void BM_SolvePocock(benchmark::State& state) {
    const auto stages = static_cast<std::size_t>(state.range(0));
    SequentialDesign tmpl;
    tmpl.num_stages = stages;
    tmpl.stage_n.assign(stages, 1);
    tmpl.boundaries.assign(stages, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_pocock(0.025, stages, tmpl));
    }
}
BENCHMARK(BM_SolvePocock)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_SimulateTrials(benchmark::State& state) {
    SimConfig cfg;
    cfg.design = {2, {25, 25}, {2.18, 2.18}};
    cfg.theta = 0.05;
    cfg.replications = static_cast<std::size_t>(state.range(0));
    cfg.seed = 99;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_simulation(cfg, 1));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateTrials)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SubstreamDraws(benchmark::State& state) {
    std::uint64_t rep = 0;
    for (auto _ : state) {
        SplitMix64 rng = substream(7, rep++);
        double acc = 0.0;
        for (int i = 0; i < 50; ++i) acc += standard_normal(rng);
        benchmark::DoNotOptimize(acc);
    }
    state.SetItemsProcessed(state.iterations() * 50);
}
BENCHMARK(BM_SubstreamDraws);

} // namespace

BENCHMARK_MAIN();
