#include <benchmark/benchmark.h>

#include <algorithm>

#include "common.hpp"
#include "horizonbench/metrics.hpp"

namespace hb = horizonbench;

namespace {

hb::QuantileForecast spread_forecast(const std::vector<double>& center) {
    std::vector<double> v;
    for (std::size_t k = 0; k < hb::kNumQuantiles; ++k) {
        for (double c : center) v.push_back(c * (0.6 + 0.1 * static_cast<double>(k)));
    }
    return {hb::Date{std::chrono::year{2012}, std::chrono::month{1}, std::chrono::day{1}}, center.size(), v};
}

}  // namespace

static void BM_Score(benchmark::State& state) {
    const auto h = static_cast<std::size_t>(state.range(0));
    auto ctx = hbbench::demand_series(5 * h, 1);
    auto actuals = hbbench::demand_series(h, 2);
    auto f = spread_forecast(hbbench::demand_series(h, 3));
    const auto convention = state.range(1) ? hb::MetricConvention::naive_scaled : hb::MetricConvention::density;
    for (auto _ : state) benchmark::DoNotOptimize(hb::score(actuals, f, ctx, convention));
}
BENCHMARK(BM_Score)->ArgsProduct({{7, 31, 91}, {0, 1}});
