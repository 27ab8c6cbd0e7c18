#include "horizonbench/quantile_forecast.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "horizonbench/error.hpp"

namespace horizonbench {

QuantileForecast::QuantileForecast(Date start_date, std::size_t horizon, std::vector<double> level_major)
    : start_(start_date), horizon_(horizon), values_(std::move(level_major)) {
    if (horizon_ == 0) throw InvalidArgument("insufficient horizon");
    if (values_.size() != kNumQuantiles * horizon_) {
        throw InvalidArgument("quantile matrix must be 9 x horizon");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw Error("non-finite quantile value");
    }
    for (std::size_t day = 0; day < horizon_; ++day) {
        for (std::size_t k = 1; k < kNumQuantiles; ++k) {
            if (at(k, day) < at(k - 1, day)) {
                throw Error("quantiles not monotone on day " + std::to_string(day));
            }
        }
    }
}

QuantileForecast QuantileForecast::degenerate(Date start_date, std::span<const double> path) {
    std::vector<double> values;
    values.reserve(kNumQuantiles * path.size());
    for (std::size_t k = 0; k < kNumQuantiles; ++k) values.insert(values.end(), path.begin(), path.end());
    return QuantileForecast(start_date, path.size(), std::move(values));
}

QuantileForecast QuantileForecast::clamped_non_negative() const {
    std::vector<double> v = values_;
    for (double& x : v) x = std::max(x, 0.0);
    return QuantileForecast(start_, horizon_, std::move(v));
}

double empirical_quantile(std::span<const double> sorted, double tau) {
    if (sorted.empty()) throw InvalidArgument("empirical quantile of empty sample");
    const double pos = static_cast<double>(sorted.size() - 1) * tau;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

QuantileForecast trajectories_to_quantiles(const Eigen::MatrixXd& samples, const Date& start_date) {
    if (samples.rows() < 1) throw InvalidArgument("need at least one trajectory");
    const auto horizon = static_cast<std::size_t>(samples.cols());
    std::vector<double> values(kNumQuantiles * horizon);
    std::vector<double> column(static_cast<std::size_t>(samples.rows()));
    for (std::size_t day = 0; day < horizon; ++day) {
        for (Eigen::Index s = 0; s < samples.rows(); ++s) {
            column[static_cast<std::size_t>(s)] = samples(s, static_cast<Eigen::Index>(day));
        }
        std::sort(column.begin(), column.end());
        for (std::size_t k = 0; k < kNumQuantiles; ++k) {
            double q = empirical_quantile(column, kQuantileLevels[k]);
            // Interpolation rounding can undershoot the previous level by an ulp.
            if (k > 0) q = std::max(q, values[(k - 1) * horizon + day]);
            values[k * horizon + day] = q;
        }
    }
    return QuantileForecast(start_date, horizon, std::move(values));
}

}  // namespace horizonbench
