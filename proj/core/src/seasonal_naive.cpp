#include "horizonbench/seasonal_naive.hpp"

#include <string>

#include "horizonbench/error.hpp"

namespace horizonbench {

std::vector<double> seasonal_naive_point(std::span<const double> context, int horizon_days,
                                         int season_length) {
    if (season_length <= 0) throw InvalidArgument("invalid parameter: season_length must be positive");
    if (horizon_days <= 0) throw InvalidArgument("insufficient horizon");
    if (context.size() < static_cast<std::size_t>(season_length)) {
        throw Error("insufficient context: need " + std::to_string(season_length) + " values, got " +
                    std::to_string(context.size()));
    }
    const long long n = static_cast<long long>(context.size());
    const long long m = season_length;
    std::vector<double> out(static_cast<std::size_t>(horizon_days));
    for (long long h = 1; h <= horizon_days; ++h) {
        const long long back = m * ((h + m - 1) / m);
        out[static_cast<std::size_t>(h - 1)] = context[static_cast<std::size_t>(n - 1 + h - back)];
    }
    return out;
}

SeasonalNaiveForecaster::SeasonalNaiveForecaster(int season_length) : season_length_(season_length) {
    if (season_length_ <= 0) throw InvalidArgument("invalid parameter: season_length must be positive");
}

ForecastResult SeasonalNaiveForecaster::forecast(const DailySeries& context, int horizon_days,
                                                 std::uint64_t /*seed*/) {
    auto values = context.values();
    auto path = seasonal_naive_point(values, horizon_days, season_length_);
    Date start = add_days(context.end_date(), 1);
    return {QuantileForecast::degenerate(start, path),
            "season_length=" + std::to_string(season_length_)};
}

}  // namespace horizonbench
