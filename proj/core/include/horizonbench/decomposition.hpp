#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "horizonbench/forecaster.hpp"

namespace horizonbench {

struct DecompositionConfig {
    /// Requested changepoints; capped at context_length / 4.
    int n_changepoints = 25;
    /// Changepoints are spread over this leading fraction of the context.
    double changepoint_range = 0.8;
    /// Prior precision of the changepoint deltas and Fourier coefficients in
    /// max-scaled units. The ridge weight is reg_strength * residual variance.
    double reg_strength = 20.0;
    int weekly_order = 3;
    /// Dropped automatically when the context is shorter than 366 days.
    int yearly_order = 10;

    void validate() const;
};

/// Additive model y(t) = g(t) + s(t) + h(t) + e(t) on the scaled time axis
/// tau = t / (n - 1), t the day index into the context.
///
/// g(tau) = offset + slope * tau + sum_j delta_j * max(tau - s_j, 0)
/// s(t)   = weekly and yearly Fourier terms on the absolute day number
/// h(t)   = holiday_effects lookup (empty unless filled in by the caller)
struct DecompositionModel {
    Date start;
    int n = 0;
    /// max |y| of the context; every coefficient below is in y / y_scale units.
    double y_scale = 1.0;

    std::vector<double> changepoints;  // tau positions, strictly increasing
    std::vector<Date> changepoint_dates;
    double offset = 0.0;
    double slope = 0.0;
    std::vector<double> deltas;

    int weekly_order = 0;
    int yearly_order = 0;
    /// (sin_1, cos_1, sin_2, cos_2, ...) per block.
    std::vector<double> weekly_coeffs;
    std::vector<double> yearly_coeffs;

    std::map<Date, double> holiday_effects;

    /// Residual standard deviation, in original units.
    double sigma_resid = 0.0;
    /// Ridge weight the fit settled on.
    double ridge_lambda = 0.0;

    /// Components at day index t (may lie beyond the context), original units.
    [[nodiscard]] double trend(double t) const;
    [[nodiscard]] double weekly(double t) const;
    [[nodiscard]] double yearly(double t) const;
    [[nodiscard]] double seasonal(double t) const { return weekly(t) + yearly(t); }
    [[nodiscard]] double holiday(double t) const;
    [[nodiscard]] double fitted(double t) const { return trend(t) + seasonal(t) + holiday(t); }

    /// Trend knots and coefficients for the run manifest.
    [[nodiscard]] std::string describe() const;
};

/// Ridge least-squares fit; needs at least 14 values ("insufficient context").
DecompositionModel fit_decomposition(std::span<const double> values, const Date& start,
                                     const DecompositionConfig& config = {});
DecompositionModel fit_decomposition(const DailySeries& context, const DecompositionConfig& config = {});

/// Deterministic g + s + h for the horizon_days days after the context.
std::vector<double> point_path(const DecompositionModel& model, int horizon_days);

/// Monte-Carlo future paths: new changepoints arrive as a Poisson process at
/// the fitted rate with Laplace slope shocks scaled by mean |delta|, plus
/// Gaussian noise of sigma_resid. Quantiles are clamped at zero.
QuantileForecast predict_decomposition(const DecompositionModel& model, int horizon_days, int num_samples,
                                       std::uint64_t seed);

/// Raw simulated paths (num_samples x horizon_days), before clamping.
Eigen::MatrixXd simulate_paths(const DecompositionModel& model, int horizon_days, int num_samples,
                               std::uint64_t seed);

class DecompositionForecaster final : public Forecaster {
public:
    explicit DecompositionForecaster(DecompositionConfig config = {}, int num_samples = 500);

    ForecastResult forecast(const DailySeries& context, int horizon_days, std::uint64_t seed) override;

private:
    DecompositionConfig config_;
    int num_samples_;
};

}  // namespace horizonbench
