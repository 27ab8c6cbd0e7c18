#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "horizonbench/calendar.hpp"

namespace horizonbench {

inline constexpr std::size_t kNumQuantiles = 9;
inline constexpr std::array<double, kNumQuantiles> kQuantileLevels{0.1, 0.2, 0.3, 0.4, 0.5,
                                                                     0.6, 0.7, 0.8, 0.9};
inline constexpr std::size_t kMedianIndex = 4;

/// Per-day values at the nine decimal quantile levels.
///
/// Stored level-major: row(k) is the path of level kQuantileLevels[k] over the
/// horizon. Construction checks horizon >= 1, finiteness, and that each day's
/// values are non-decreasing across levels.
class QuantileForecast {
public:
    QuantileForecast(Date start_date, std::size_t horizon, std::vector<double> level_major);

    /// Same value at every level (a point mass).
    static QuantileForecast degenerate(Date start_date, std::span<const double> path);

    [[nodiscard]] const Date& start_date() const noexcept { return start_; }
    [[nodiscard]] std::size_t horizon() const noexcept { return horizon_; }

    [[nodiscard]] std::span<const double> row(std::size_t level) const {
        return {values_.data() + level * horizon_, horizon_};
    }
    [[nodiscard]] double at(std::size_t level, std::size_t day) const {
        return values_[level * horizon_ + day];
    }
    [[nodiscard]] std::span<const double> median() const { return row(kMedianIndex); }

    /// Copy with every value replaced by max(value, 0).
    [[nodiscard]] QuantileForecast clamped_non_negative() const;

    friend bool operator==(const QuantileForecast&, const QuantileForecast&) = default;

private:
    Date start_;
    std::size_t horizon_;
    std::vector<double> values_;
};

/// Empirical quantile of sorted data at level tau: linear interpolation between
/// order statistics at position (n - 1) * tau.
double empirical_quantile(std::span<const double> sorted, double tau);

/// Per-day empirical quantiles of a num_samples x horizon matrix.
QuantileForecast trajectories_to_quantiles(const Eigen::MatrixXd& samples, const Date& start_date);

}  // namespace horizonbench
