#include "horizonbench/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "horizonbench/error.hpp"

namespace horizonbench {

namespace {

constexpr double kWeekPeriod = 7.0;
constexpr double kYearPeriod = 365.25;
constexpr double kVarianceFloor = 1e-16;
constexpr int kMaxRidgeIterations = 100;

void fourier_row(double day, double period, int order, double* out) {
    for (int k = 1; k <= order; ++k) {
        const double angle = 2.0 * std::numbers::pi * k * day / period;
        out[2 * (k - 1)] = std::sin(angle);
        out[2 * (k - 1) + 1] = std::cos(angle);
    }
}

double fourier_value(double day, double period, const std::vector<double>& coeffs) {
    const int order = static_cast<int>(coeffs.size() / 2);
    double v = 0.0;
    for (int k = 1; k <= order; ++k) {
        const double angle = 2.0 * std::numbers::pi * k * day / period;
        v += coeffs[static_cast<std::size_t>(2 * (k - 1))] * std::sin(angle) +
             coeffs[static_cast<std::size_t>(2 * (k - 1) + 1)] * std::cos(angle);
    }
    return v;
}

double laplace(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const double x = u(rng);
    return -scale * std::copysign(1.0, x) * std::log1p(-2.0 * std::abs(x));
}

}  // namespace

void DecompositionConfig::validate() const {
    if (n_changepoints < 0) throw InvalidArgument("invalid n_changepoints " + std::to_string(n_changepoints));
    if (!(changepoint_range > 0.0 && changepoint_range <= 1.0)) {
        throw InvalidArgument("invalid changepoint_range " + std::to_string(changepoint_range));
    }
    if (!(reg_strength >= 0.0) || !std::isfinite(reg_strength)) {
        throw InvalidArgument("invalid reg_strength " + std::to_string(reg_strength));
    }
    if (weekly_order < 0 || weekly_order > 3) throw InvalidArgument("invalid weekly_order " + std::to_string(weekly_order));
    if (yearly_order < 0) throw InvalidArgument("invalid yearly_order " + std::to_string(yearly_order));
}

double DecompositionModel::trend(double t) const {
    const double tau = t / static_cast<double>(n - 1);
    double g = offset + slope * tau;
    for (std::size_t j = 0; j < changepoints.size(); ++j) g += deltas[j] * std::max(tau - changepoints[j], 0.0);
    return g * y_scale;
}

double DecompositionModel::weekly(double t) const {
    return fourier_value(static_cast<double>(day_number(start)) + t, kWeekPeriod, weekly_coeffs) * y_scale;
}

double DecompositionModel::yearly(double t) const {
    return fourier_value(static_cast<double>(day_number(start)) + t, kYearPeriod, yearly_coeffs) * y_scale;
}

double DecompositionModel::holiday(double t) const {
    if (holiday_effects.empty()) return 0.0;
    const double whole = std::floor(t);
    if (whole != t) return 0.0;
    auto it = holiday_effects.find(add_days(start, static_cast<long long>(whole)));
    return it == holiday_effects.end() ? 0.0 : it->second;
}

std::string DecompositionModel::describe() const {
    std::ostringstream out;
    out.precision(6);
    out << "n=" << n << " offset=" << offset * y_scale << " slope_per_day=" << slope * y_scale / (n - 1)
        << " changepoints=" << changepoints.size() << " knots=[";
    for (std::size_t j = 0; j < changepoint_dates.size(); ++j) {
        out << (j ? "," : "") << format_date(changepoint_dates[j]) << ":" << deltas[j] * y_scale / (n - 1);
    }
    out << "] weekly_order=" << weekly_order << " yearly_order=" << yearly_order << " weekly=[";
    for (std::size_t i = 0; i < weekly_coeffs.size(); ++i) out << (i ? "," : "") << weekly_coeffs[i] * y_scale;
    out << "] yearly=[";
    for (std::size_t i = 0; i < yearly_coeffs.size(); ++i) out << (i ? "," : "") << yearly_coeffs[i] * y_scale;
    out << "] sigma_resid=" << sigma_resid;
    return out.str();
}

DecompositionModel fit_decomposition(std::span<const double> values, const Date& start,
                                     const DecompositionConfig& config) {
    config.validate();
    const int n = static_cast<int>(values.size());
    if (n < 14) throw Error("insufficient context: decomposition needs at least 14 days, got " + std::to_string(n));
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument("non-finite value in decomposition context");
    }

    DecompositionModel model;
    model.start = start;
    model.n = n;
    double max_abs = 0.0;
    for (double v : values) max_abs = std::max(max_abs, std::abs(v));
    model.y_scale = max_abs > 0.0 ? max_abs : 1.0;

    // Changepoints at evenly spaced indices over the leading history, first index excluded.
    const int n_cp = std::min(config.n_changepoints, n / 4);
    const int hist = std::max(2, static_cast<int>(std::floor(n * config.changepoint_range)));
    std::vector<int> cp_index;
    for (int j = 1; j <= n_cp; ++j) {
        const int idx = static_cast<int>(std::lround(static_cast<double>(j) * (hist - 1) / n_cp));
        if (idx > 0 && (cp_index.empty() || idx > cp_index.back())) cp_index.push_back(idx);
    }
    for (int idx : cp_index) {
        model.changepoints.push_back(static_cast<double>(idx) / (n - 1));
        model.changepoint_dates.push_back(add_days(start, idx));
    }

    model.weekly_order = config.weekly_order;
    model.yearly_order = n >= 366 ? config.yearly_order : 0;

    const int S = static_cast<int>(model.changepoints.size());
    const int kw = 2 * model.weekly_order, ky = 2 * model.yearly_order;
    const int cols = 2 + S + kw + ky;
    Eigen::MatrixXd X(n, cols);
    Eigen::VectorXd y(n);
    const double day0 = static_cast<double>(day_number(start));
    std::vector<double> row(static_cast<std::size_t>(std::max(kw, ky)));
    for (int t = 0; t < n; ++t) {
        const double tau = static_cast<double>(t) / (n - 1);
        X(t, 0) = 1.0;
        X(t, 1) = tau;
        for (int j = 0; j < S; ++j) X(t, 2 + j) = std::max(tau - model.changepoints[static_cast<std::size_t>(j)], 0.0);
        fourier_row(day0 + t, kWeekPeriod, model.weekly_order, row.data());
        for (int k = 0; k < kw; ++k) X(t, 2 + S + k) = row[static_cast<std::size_t>(k)];
        fourier_row(day0 + t, kYearPeriod, model.yearly_order, row.data());
        for (int k = 0; k < ky; ++k) X(t, 2 + S + kw + k) = row[static_cast<std::size_t>(k)];
        y(t) = values[static_cast<std::size_t>(t)] / model.y_scale;
    }

    // MAP fit with a Gaussian prior of precision reg_strength on everything
    // except offset and slope: ridge weight reg_strength * sigma^2, iterated to
    // the fixed point of the residual variance.
    const int penalized = cols - 2;
    Eigen::MatrixXd A(n + penalized, cols);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + penalized);
    A.topRows(n) = X;
    A.bottomRows(penalized).setZero();
    b.head(n) = y;

    double sigma2 = std::max((y.array() - y.mean()).square().mean(), kVarianceFloor);
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(cols);
    double lambda = 0.0;
    for (int iter = 0; iter < kMaxRidgeIterations; ++iter) {
        lambda = config.reg_strength * sigma2;
        const double root = std::sqrt(lambda);
        for (int k = 0; k < penalized; ++k) A(n + k, 2 + k) = root;
        beta = A.colPivHouseholderQr().solve(b);
        const double next = std::max((y - X * beta).squaredNorm() / n, kVarianceFloor);
        const bool settled = std::abs(next - sigma2) <= 1e-10 * sigma2;
        sigma2 = next;
        if (settled || next <= kVarianceFloor) break;
    }

    model.ridge_lambda = lambda;
    model.offset = beta(0);
    model.slope = beta(1);
    model.deltas.assign(beta.data() + 2, beta.data() + 2 + S);
    model.weekly_coeffs.assign(beta.data() + 2 + S, beta.data() + 2 + S + kw);
    model.yearly_coeffs.assign(beta.data() + 2 + S + kw, beta.data() + cols);
    model.sigma_resid = std::sqrt((y - X * beta).squaredNorm() / n) * model.y_scale;
    return model;
}

DecompositionModel fit_decomposition(const DailySeries& context, const DecompositionConfig& config) {
    return fit_decomposition(context.values(), context.start_date(), config);
}

std::vector<double> point_path(const DecompositionModel& model, int horizon_days) {
    if (horizon_days <= 0) throw InvalidArgument("insufficient horizon");
    std::vector<double> out(static_cast<std::size_t>(horizon_days));
    for (int h = 0; h < horizon_days; ++h) out[static_cast<std::size_t>(h)] = model.fitted(model.n + h);
    return out;
}

Eigen::MatrixXd simulate_paths(const DecompositionModel& model, int horizon_days, int num_samples,
                               std::uint64_t seed) {
    if (horizon_days <= 0) throw InvalidArgument("insufficient horizon");
    if (num_samples <= 0) throw InvalidArgument("invalid num_samples " + std::to_string(num_samples));

    const auto base = point_path(model, horizon_days);
    const double span = static_cast<double>(model.n - 1);
    const double tau_end = (span + horizon_days) / span;
    double mean_abs_delta = 0.0;
    for (double d : model.deltas) mean_abs_delta += std::abs(d);
    if (!model.deltas.empty()) mean_abs_delta /= static_cast<double>(model.deltas.size());
    const double expected_changes = static_cast<double>(model.changepoints.size()) * (tau_end - 1.0);
    const double noise_sd = model.sigma_resid / model.y_scale;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> position(1.0, tau_end);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd paths(num_samples, horizon_days);
    std::vector<std::pair<double, double>> shocks;
    for (int s = 0; s < num_samples; ++s) {
        shocks.clear();
        if (expected_changes > 0.0 && mean_abs_delta > 0.0) {
            std::poisson_distribution<int> count(expected_changes);
            const int c = count(rng);
            for (int i = 0; i < c; ++i) {
                const double at = position(rng);
                shocks.emplace_back(at, laplace(rng, mean_abs_delta));
            }
        }
        for (int h = 0; h < horizon_days; ++h) {
            const double tau = (span + 1.0 + h) / span;
            double shift = 0.0;
            for (auto [at, delta] : shocks) shift += delta * std::max(tau - at, 0.0);
            const double eps = noise_sd > 0.0 ? noise_sd * noise(rng) : 0.0;
            paths(s, h) = base[static_cast<std::size_t>(h)] + (shift + eps) * model.y_scale;
        }
    }
    return paths;
}

QuantileForecast predict_decomposition(const DecompositionModel& model, int horizon_days, int num_samples,
                                       std::uint64_t seed) {
    auto paths = simulate_paths(model, horizon_days, num_samples, seed);
    return trajectories_to_quantiles(paths, add_days(model.start, model.n)).clamped_non_negative();
}

DecompositionForecaster::DecompositionForecaster(DecompositionConfig config, int num_samples)
    : config_(config), num_samples_(num_samples) {
    config_.validate();
    if (num_samples_ <= 0) throw InvalidArgument("invalid num_samples " + std::to_string(num_samples_));
}

ForecastResult DecompositionForecaster::forecast(const DailySeries& context, int horizon_days, std::uint64_t seed) {
    if (horizon_days <= 0) throw InvalidArgument("insufficient horizon");
    auto model = fit_decomposition(context, config_);
    return {predict_decomposition(model, horizon_days, num_samples_, seed), model.describe()};
}

}  // namespace horizonbench
