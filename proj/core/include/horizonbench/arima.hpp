#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "horizonbench/forecaster.hpp"

namespace horizonbench::arima {

struct ArimaOrder {
    int p = 0;
    int d = 0;
    int q = 0;

    /// "(p,d,q)".
    [[nodiscard]] std::string label() const;

    friend bool operator==(const ArimaOrder&, const ArimaOrder&) = default;
};

/// Coefficients of (1 - sum phi_i L^i)(1 - L)^d (X_t - c) = (1 + sum theta_j L^j) e_t,
/// with the intercept c only present for d = 0.
struct ArimaParams {
    std::vector<double> phi;
    std::vector<double> theta;
    double sigma2 = 0.0;
    double intercept = 0.0;
};

struct FitStatistics {
    double log_likelihood = 0.0;
    double aicc = 0.0;
    /// Length of the differenced series the likelihood was evaluated on.
    int n_obs = 0;
    int iterations = 0;
    bool converged = false;
    bool has_intercept = false;
    /// Some partial autocorrelation of the AR or MA part is within 1e-3 of +-1.
    bool near_boundary = false;
};

struct ArimaFit {
    ArimaOrder order;
    ArimaParams params;
    FitStatistics stats;

    /// One-line summary for the run manifest.
    [[nodiscard]] std::string describe() const;
};

/// (1 - L)^d applied to `values`; output has values.size() - d entries.
std::vector<double> difference(std::span<const double> values, int d);

/// Inverse of difference(): rebuilds the original series from its d-th
/// difference and the first d original values.
std::vector<double> integrate(std::span<const double> differenced, std::span<const double> head, int d);

/// 5% critical value of the KPSS level-stationarity statistic.
inline constexpr double kKpssCritical5 = 0.463;

/// KPSS level-stationarity statistic with a Bartlett long-run variance and
/// lag truncation floor(4 (n/100)^(1/4)). Zero for a constant series.
double kpss_statistic(std::span<const double> values);

/// Smallest d in {0, 1} whose differenced series has a KPSS statistic below
/// the 5% critical value; 2 otherwise. Needs at least 20 values.
int select_d(std::span<const double> values);

/// Roots of c[0] + c[1] z + ... + c[k] z^k (trailing zero coefficients dropped).
std::vector<std::complex<double>> polynomial_roots(std::span<const double> coefficients);

/// Every root of 1 - sum phi_i z^i has modulus > 1.
bool is_causal(std::span<const double> phi);

/// Every root of 1 + sum theta_j z^j has modulus > 1.
bool is_invertible(std::span<const double> theta);

/// Exact Gaussian log-likelihood of a zero-mean ARMA(p, q) series with the
/// innovation variance profiled out (Kalman filter on the Harvey state-space
/// form, stationary initial covariance). Returns the log-likelihood and the
/// profiled variance.
struct ArmaLikelihood {
    double log_likelihood;
    double sigma2;
};
ArmaLikelihood arma_log_likelihood(std::span<const double> centered, std::span<const double> phi,
                                   std::span<const double> theta);

struct FitOptions {
    /// Defaults to true for d = 0 and false otherwise.
    std::optional<bool> include_intercept;
    int max_iterations = 500;
    double tolerance = 1e-8;
};

/// Maximum-likelihood fit of ARIMA(order). Conditional sum of squares seeds the
/// optimizer, exact likelihood decides the answer. Parameters are optimized in
/// the partial-autocorrelation parametrization, so the result is always causal
/// and invertible.
///
/// Errors: "insufficient data" when values.size() < 10 + p + q + d,
/// "degenerate variance" for a constant differenced series, "fit failed" when
/// the optimizer does not converge.
ArimaFit fit(std::span<const double> values, const ArimaOrder& order, const FitOptions& options = {});

struct AutoOptions {
    int p_max = 5;
    int q_max = 5;
};

/// Stepwise order search: d from select_d() (0 for series shorter than 20),
/// start set (0,0), (1,0), (0,1), (2,2), then +-1 moves on p and/or q while
/// AICc strictly improves.
ArimaFit auto_fit(std::span<const double> values, const AutoOptions& options = {});

/// psi_0 .. psi_{count-1} of the MA(infinity) form of the integrated model.
std::vector<double> psi_weights(std::span<const double> phi, std::span<const double> theta, int d,
                                int count);

struct PointForecast {
    std::vector<double> mean;
    std::vector<double> sd;
};

PointForecast forecast_mean(const ArimaParams& params, const ArimaOrder& order,
                            std::span<const double> context, int horizon_days);

/// Gaussian predictive quantiles mean + z_tau * sd, clamped at zero.
QuantileForecast predict_quantiles(const ArimaParams& params, const ArimaOrder& order,
                                   std::span<const double> context, int horizon_days,
                                   const Date& start_date);

/// Standard normal quantiles at the nine decimal levels.
inline constexpr double kNormalQuantiles[9] = {-1.281551565545, -0.841621233573, -0.524400512708,
                                               -0.253347103136, 0.0,             0.253347103136,
                                               0.524400512708,  0.841621233573,  1.281551565545};

class ArimaForecaster final : public Forecaster {
public:
    explicit ArimaForecaster(AutoOptions options = {}) : options_(options) {}

    ForecastResult forecast(const DailySeries& context, int horizon_days, std::uint64_t seed) override;

private:
    AutoOptions options_;
};

}  // namespace horizonbench::arima
