#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "horizonbench/quantile_forecast.hpp"

namespace horizonbench {

struct MetricTriple {
    double emd;
    double mase;
    double wql;

    friend bool operator==(const MetricTriple&, const MetricTriple&) = default;
};

/// Seasonal MASE: mean |a - f| over the in-sample seasonal-naive MAE of the
/// context with lag season_length.
///
/// Errors: "undefined MASE scale" when that MAE is zero, InvalidArgument on
/// length mismatch or a context no longer than season_length.
double mase(std::span<const double> actuals, std::span<const double> point_forecast,
            std::span<const double> context, int season_length = 7);

/// Pinball loss of one quantile path, summed over the horizon.
double pinball_loss(std::span<const double> actuals, std::span<const double> quantile_path, double tau);

/// Mean over the nine levels of 2 * pinball / sum |a|. "undefined WQL" when
/// every actual is zero.
double wql(std::span<const double> actuals, const QuantileForecast& forecast);

/// Sum_t |CDF_a(t) - CDF_b(t)| after normalizing both to unit mass.
/// "degenerate density" when either has zero mass.
double emd_1d(std::span<const double> a, std::span<const double> b);

/// emd_1d between the actuals and each quantile row, averaged over levels.
double emd_quantile_mean(std::span<const double> actuals, const QuantileForecast& forecast);

/// Mean |context[t] - context[t - lag]|. "undefined MASE scale" when zero.
double naive_scale(std::span<const double> context, int lag);

/// 1-D Wasserstein distance between the empirical distributions of two
/// equally sized samples: mean |sorted(a) - sorted(b)|.
double wasserstein_values(std::span<const double> a, std::span<const double> b);

/// wasserstein_values between the actuals and each quantile row, divided by
/// naive_scale(context, 1), averaged over levels.
double emd_value_scaled(std::span<const double> actuals, const QuantileForecast& forecast,
                        std::span<const double> context);

/// How MASE and EMD are scaled.
///   density:      seasonal MASE with lag 7; EMD on unit-mass densities over days.
///   naive_scaled: MASE with lag 1; EMD between value distributions, in units
///                 of the lag-1 in-sample naive MAE.
/// WQL is the same under both.
enum class MetricConvention { density, naive_scaled };

std::string_view to_string(MetricConvention c);
std::optional<MetricConvention> parse_metric_convention(std::string_view text);

/// All three, with the median row as the point forecast for MASE.
MetricTriple score(std::span<const double> actuals, const QuantileForecast& forecast,
                   std::span<const double> context, MetricConvention convention = MetricConvention::density);

}  // namespace horizonbench
