#include <benchmark/benchmark.h>

#include "common.hpp"
#include "horizonbench/decomposition.hpp"

namespace hb = horizonbench;

static void BM_FitDecomposition(benchmark::State& state) {
    auto y = hbbench::demand_series(static_cast<std::size_t>(state.range(0)));
    const hb::Date start{std::chrono::year{2011}, std::chrono::month{1}, std::chrono::day{1}};
    for (auto _ : state) benchmark::DoNotOptimize(hb::fit_decomposition(y, start));
}
BENCHMARK(BM_FitDecomposition)->Arg(62)->Arg(273)->Arg(455)->Unit(benchmark::kMillisecond);

static void BM_PredictDecomposition(benchmark::State& state) {
    auto y = hbbench::demand_series(364);
    const hb::Date start{std::chrono::year{2011}, std::chrono::month{1}, std::chrono::day{1}};
    auto model = hb::fit_decomposition(y, start);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hb::predict_decomposition(model, 91, static_cast<int>(state.range(0)), 7));
    }
}
BENCHMARK(BM_PredictDecomposition)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);
