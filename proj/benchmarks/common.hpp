#pragma once

#include <cmath>
#include <random>
#include <vector>

namespace hbbench {

// Weekly-seasonal count-like series with noise.
inline std::vector<double> demand_series(std::size_t n, std::uint64_t seed = 1) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 40.0);
    std::vector<double> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        y[t] = std::max(0.0, 800.0 + 2.0 * t + 150.0 * std::sin(6.283185307179586 * t / 7.0) + z(rng));
    }
    return y;
}

}  // namespace hbbench
