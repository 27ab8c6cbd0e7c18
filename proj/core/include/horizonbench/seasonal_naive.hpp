#pragma once

#include <span>
#include <vector>

#include "horizonbench/forecaster.hpp"

namespace horizonbench {

/// y[T+h] = y[T+h - m*ceil(h/m)]: the last season block, repeated.
std::vector<double> seasonal_naive_point(std::span<const double> context, int horizon_days,
                                         int season_length);

/// Point forecast emitted at all nine levels.
class SeasonalNaiveForecaster final : public Forecaster {
public:
    explicit SeasonalNaiveForecaster(int season_length = 7);

    ForecastResult forecast(const DailySeries& context, int horizon_days, std::uint64_t seed) override;

private:
    int season_length_;
};

}  // namespace horizonbench
