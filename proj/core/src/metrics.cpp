#include "horizonbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <string>

#include "horizonbench/error.hpp"

namespace horizonbench {

namespace {

void check_lengths(std::size_t actuals, std::size_t forecast) {
    if (actuals != forecast) {
        throw InvalidArgument("horizon mismatch: " + std::to_string(actuals) + " actuals vs " +
                              std::to_string(forecast) + " forecast days");
    }
    if (actuals == 0) throw InvalidArgument("insufficient horizon");
}

}  // namespace

double naive_scale(std::span<const double> context, int lag) {
    if (lag <= 0) throw InvalidArgument("invalid season_length " + std::to_string(lag));
    const auto m = static_cast<std::size_t>(lag);
    if (context.size() <= m) {
        throw InvalidArgument("insufficient context: MASE needs more than " + std::to_string(m) + " values");
    }
    double scale = 0.0;
    for (std::size_t t = m; t < context.size(); ++t) scale += std::abs(context[t] - context[t - m]);
    scale /= static_cast<double>(context.size() - m);
    if (!(scale > 0.0)) throw Error("undefined MASE scale: context is exactly periodic with lag " + std::to_string(m));
    return scale;
}

double mase(std::span<const double> actuals, std::span<const double> point_forecast,
            std::span<const double> context, int season_length) {
    check_lengths(actuals.size(), point_forecast.size());
    const double scale = naive_scale(context, season_length);
    double err = 0.0;
    for (std::size_t t = 0; t < actuals.size(); ++t) err += std::abs(actuals[t] - point_forecast[t]);
    err /= static_cast<double>(actuals.size());
    return err / scale;
}

double pinball_loss(std::span<const double> actuals, std::span<const double> quantile_path, double tau) {
    check_lengths(actuals.size(), quantile_path.size());
    double loss = 0.0;
    for (std::size_t t = 0; t < actuals.size(); ++t) {
        const double diff = actuals[t] - quantile_path[t];
        loss += diff >= 0.0 ? tau * diff : (tau - 1.0) * diff;
    }
    return loss;
}

double wql(std::span<const double> actuals, const QuantileForecast& forecast) {
    check_lengths(actuals.size(), forecast.horizon());
    double denom = 0.0;
    for (double a : actuals) denom += std::abs(a);
    if (!(denom > 0.0)) throw Error("undefined WQL: actuals are all zero");
    double total = 0.0;
    for (std::size_t k = 0; k < kNumQuantiles; ++k) {
        total += 2.0 * pinball_loss(actuals, forecast.row(k), kQuantileLevels[k]) / denom;
    }
    return total / static_cast<double>(kNumQuantiles);
}

double emd_1d(std::span<const double> a, std::span<const double> b) {
    check_lengths(a.size(), b.size());
    double mass_a = 0.0, mass_b = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        if (a[t] < 0.0 || b[t] < 0.0) throw InvalidArgument("negative density value");
        mass_a += a[t];
        mass_b += b[t];
    }
    if (!(mass_a > 0.0) || !(mass_b > 0.0)) throw Error("degenerate density: zero total mass");
    double cdf_a = 0.0, cdf_b = 0.0, dist = 0.0;
    for (std::size_t t = 0; t < a.size(); ++t) {
        cdf_a += a[t] / mass_a;
        cdf_b += b[t] / mass_b;
        dist += std::abs(cdf_a - cdf_b);
    }
    return dist;
}

double emd_quantile_mean(std::span<const double> actuals, const QuantileForecast& forecast) {
    check_lengths(actuals.size(), forecast.horizon());
    double total = 0.0;
    for (std::size_t k = 0; k < kNumQuantiles; ++k) total += emd_1d(actuals, forecast.row(k));
    return total / static_cast<double>(kNumQuantiles);
}

double wasserstein_values(std::span<const double> a, std::span<const double> b) {
    check_lengths(a.size(), b.size());
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    double total = 0.0;
    for (std::size_t i = 0; i < sa.size(); ++i) total += std::abs(sa[i] - sb[i]);
    return total / static_cast<double>(sa.size());
}

double emd_value_scaled(std::span<const double> actuals, const QuantileForecast& forecast,
                        std::span<const double> context) {
    check_lengths(actuals.size(), forecast.horizon());
    const double scale = naive_scale(context, 1);
    double total = 0.0;
    for (std::size_t k = 0; k < kNumQuantiles; ++k) total += wasserstein_values(actuals, forecast.row(k));
    return total / static_cast<double>(kNumQuantiles) / scale;
}

std::string_view to_string(MetricConvention c) {
    return c == MetricConvention::naive_scaled ? "naive_scaled" : "density";
}

std::optional<MetricConvention> parse_metric_convention(std::string_view text) {
    if (text == "density") return MetricConvention::density;
    if (text == "naive_scaled" || text == "naive-scaled") return MetricConvention::naive_scaled;
    return std::nullopt;
}

MetricTriple score(std::span<const double> actuals, const QuantileForecast& forecast,
                   std::span<const double> context, MetricConvention convention) {
    if (convention == MetricConvention::naive_scaled) {
        return {emd_value_scaled(actuals, forecast, context), mase(actuals, forecast.median(), context, 1),
                wql(actuals, forecast)};
    }
    return {emd_quantile_mean(actuals, forecast), mase(actuals, forecast.median(), context, 7), wql(actuals, forecast)};
}

}  // namespace horizonbench
