#include "horizonbench/quantized_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <string>

#include "horizonbench/error.hpp"

namespace horizonbench {

namespace {

using Histogram = std::map<int, std::uint64_t>;

int draw(const Histogram& hist, std::uint64_t total, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> pick(0, total - 1);
    std::uint64_t u = pick(rng);
    for (const auto& [token, count] : hist) {
        if (u < count) return token;
        u -= count;
    }
    return hist.rbegin()->first;
}

struct MarkovTables {
    // tables[j] maps a length-j suffix to the histogram of tokens that followed it.
    std::vector<std::map<std::vector<int>, Histogram>> tables;
    Histogram smoothed_unigram;
    std::uint64_t unigram_total = 0;
};

MarkovTables build_tables(std::span<const int> tokens, int order) {
    MarkovTables m;
    m.tables.resize(static_cast<std::size_t>(order) + 1);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
        for (int j = 1; j <= order && static_cast<std::size_t>(j) <= t; ++j) {
            std::vector<int> key(tokens.begin() + static_cast<std::ptrdiff_t>(t) - j,
                                 tokens.begin() + static_cast<std::ptrdiff_t>(t));
            ++m.tables[static_cast<std::size_t>(j)][key][tokens[t]];
        }
        ++m.smoothed_unigram[tokens[t]];
    }
    for (auto& [token, count] : m.smoothed_unigram) {
        ++count;
        m.unigram_total += count;
    }
    return m;
}

}  // namespace

void TokenizerConfig::validate() const {
    if (num_bins < 2) throw InvalidArgument("invalid parameter: num_bins must be >= 2");
    if (!(low < high)) throw InvalidArgument("invalid parameter: low must be < high");
}

TokenizedSeries tokenize(std::span<const double> values, const TokenizerConfig& cfg) {
    cfg.validate();
    if (values.empty()) throw InvalidArgument("insufficient context: empty series");
    double scale = 0.0;
    for (double v : values) scale += std::abs(v);
    scale /= static_cast<double>(values.size());
    if (!(scale > 0.0)) throw Error("zero scale");

    TokenizedSeries out{{}, scale};
    out.tokens.reserve(values.size());
    for (double v : values) {
        double scaled = std::clamp(v / scale, cfg.low, cfg.high);
        auto bin = static_cast<int>(std::floor((scaled - cfg.low) / (cfg.high - cfg.low) * cfg.num_bins));
        out.tokens.push_back(std::clamp(bin, 0, cfg.num_bins - 1));
    }
    return out;
}

double dequantize(int token, const TokenizerConfig& cfg) {
    return cfg.low + (static_cast<double>(token) + 0.5) * cfg.bin_width();
}

Eigen::MatrixXi sample_trajectories(std::span<const int> tokens, int horizon_days, int num_samples,
                                    int order, std::uint64_t seed) {
    if (num_samples <= 0) throw InvalidArgument("invalid parameter: num_samples must be positive");
    if (horizon_days <= 0) throw InvalidArgument("insufficient horizon");
    if (order < 0 || tokens.size() <= static_cast<std::size_t>(order)) {
        throw InvalidArgument("insufficient context: token sequence must be longer than the order");
    }
    const MarkovTables model = build_tables(tokens, order);
    std::mt19937_64 rng(seed);
    Eigen::MatrixXi out(num_samples, horizon_days);
    std::vector<int> path;
    for (int s = 0; s < num_samples; ++s) {
        path.assign(tokens.begin(), tokens.end());
        for (int h = 0; h < horizon_days; ++h) {
            int next = -1;
            for (int j = order; j >= 1 && next < 0; --j) {
                std::vector<int> key(path.end() - j, path.end());
                const auto& table = model.tables[static_cast<std::size_t>(j)];
                auto it = table.find(key);
                if (it == table.end()) continue;
                std::uint64_t total = 0;
                for (const auto& [tok, c] : it->second) total += c;
                next = draw(it->second, total, rng);
            }
            if (next < 0) next = draw(model.smoothed_unigram, model.unigram_total, rng);
            path.push_back(next);
            out(s, h) = next;
        }
    }
    return out;
}

QuantizedSamplerForecaster::QuantizedSamplerForecaster(TokenizerConfig cfg, int num_samples, int order)
    : cfg_(cfg), num_samples_(num_samples), order_(order) {
    cfg_.validate();
    if (num_samples_ <= 0) throw InvalidArgument("invalid parameter: num_samples must be positive");
    if (order_ < 0) throw InvalidArgument("invalid parameter: order must be >= 0");
}

ForecastResult QuantizedSamplerForecaster::forecast(const DailySeries& context, int horizon_days,
                                                    std::uint64_t seed) {
    if (horizon_days <= 0) throw InvalidArgument("insufficient horizon");
    if (context.size() <= static_cast<std::size_t>(order_)) {
        throw Error("insufficient context: need more than " + std::to_string(order_) + " values");
    }
    auto values = context.values();
    auto tok = tokenize(values, cfg_);
    Eigen::MatrixXi paths = sample_trajectories(tok.tokens, horizon_days, num_samples_, order_, seed);

    samples_.resize(paths.rows(), paths.cols());
    for (Eigen::Index i = 0; i < paths.rows(); ++i) {
        for (Eigen::Index j = 0; j < paths.cols(); ++j) {
            samples_(i, j) = dequantize(paths(i, j), cfg_) * tok.scale;
        }
    }
    Date start = add_days(context.end_date(), 1);
    auto q = trajectories_to_quantiles(samples_, start).clamped_non_negative();
    return {std::move(q), "scale=" + std::to_string(tok.scale) + " order=" + std::to_string(order_) +
                              " num_samples=" + std::to_string(num_samples_)};
}

}  // namespace horizonbench
