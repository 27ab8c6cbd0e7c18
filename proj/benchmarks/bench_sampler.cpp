#include <benchmark/benchmark.h>

#include "common.hpp"
#include "horizonbench/quantized_sampler.hpp"

namespace hb = horizonbench;

static void BM_SampleTrajectories(benchmark::State& state) {
    auto y = hbbench::demand_series(455);
    const hb::TokenizerConfig cfg{4096, -15.0, 15.0};
    const auto tokens = hb::tokenize(y, cfg).tokens;
    const int order = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hb::sample_trajectories(tokens, 91, 20, order, 11));
}
BENCHMARK(BM_SampleTrajectories)->Arg(1)->Arg(3)->Arg(7)->Unit(benchmark::kMicrosecond);
