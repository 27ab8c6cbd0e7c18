#include <benchmark/benchmark.h>

#include "common.hpp"
#include "horizonbench/arima.hpp"

namespace hb = horizonbench;

static void BM_KalmanLikelihood(benchmark::State& state) {
    auto y = hbbench::demand_series(static_cast<std::size_t>(state.range(0)));
    double mean = 0.0;
    for (double v : y) mean += v / static_cast<double>(y.size());
    for (double& v : y) v -= mean;
    const std::vector<double> phi{0.5, -0.2}, theta{0.3};
    for (auto _ : state) benchmark::DoNotOptimize(hb::arima::arma_log_likelihood(y, phi, theta));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KalmanLikelihood)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oN);

static void BM_FitArma21(benchmark::State& state) {
    auto y = hbbench::demand_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(hb::arima::fit(y, {2, 0, 1}));
}
BENCHMARK(BM_FitArma21)->Arg(62)->Arg(455)->Unit(benchmark::kMillisecond);

static void BM_AutoFit(benchmark::State& state) {
    auto y = hbbench::demand_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(hb::arima::auto_fit(y));
}
BENCHMARK(BM_AutoFit)->Arg(14)->Arg(91)->Arg(455)->Unit(benchmark::kMillisecond);
