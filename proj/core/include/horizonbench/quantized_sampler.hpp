#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "horizonbench/forecaster.hpp"

namespace horizonbench {

/// Uniform quantization grid over [low, high] in mean-scaled units.
struct TokenizerConfig {
    int num_bins = 4096;
    double low = -15.0;
    double high = 15.0;

    void validate() const;
    [[nodiscard]] double bin_width() const { return (high - low) / num_bins; }
};

struct TokenizedSeries {
    std::vector<int> tokens;
    /// Mean absolute value of the context; tokens live in value / scale units.
    double scale;
};

/// Mean-scales `values`, clamps to [low, high] and maps each to its bin index.
/// Throws Error "zero scale" for an all-zero context.
TokenizedSeries tokenize(std::span<const double> values, const TokenizerConfig& cfg);

/// Bin center of `token`, in scaled units.
double dequantize(int token, const TokenizerConfig& cfg);

/// Draws num_samples token paths of length horizon_days from an order-`order`
/// empirical Markov model of `tokens`.
///
/// The next-token distribution is the successor histogram of the longest
/// suffix (length order, order-1, ..., 1) of the current path that has been
/// followed by something in the context. With no such suffix, it falls back
/// to the unigram histogram with add-one smoothing over the observed tokens.
Eigen::MatrixXi sample_trajectories(std::span<const int> tokens, int horizon_days, int num_samples,
                                    int order, std::uint64_t seed);

/// Mean scaling, quantization, Markov sampling, dequantization and empirical
/// quantiles, clamped at zero on emission.
class QuantizedSamplerForecaster final : public Forecaster {
public:
    QuantizedSamplerForecaster(TokenizerConfig cfg, int num_samples = 20, int order = 7);

    ForecastResult forecast(const DailySeries& context, int horizon_days, std::uint64_t seed) override;

    /// Dequantized raw sample paths (before clamping) from the last call.
    [[nodiscard]] const Eigen::MatrixXd& last_samples() const noexcept { return samples_; }

private:
    TokenizerConfig cfg_;
    int num_samples_;
    int order_;
    Eigen::MatrixXd samples_;
};

}  // namespace horizonbench
