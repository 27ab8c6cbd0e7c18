#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "horizonbench/calendar.hpp"
#include "horizonbench/ingest.hpp"

namespace hbtest {

inline std::string data_dir() { return HORIZONBENCH_TEST_DATA_DIR; }

inline horizonbench::Date ymd(int y, unsigned m, unsigned d) {
    return horizonbench::Date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
}

inline horizonbench::DailySeries series_of(const std::vector<std::int64_t>& counts,
                                           horizonbench::Date start = ymd(2011, 1, 1),
                                           horizonbench::UserClass cls = horizonbench::UserClass::casual) {
    return horizonbench::DailySeries(start, counts, cls);
}

inline std::vector<double> uniform_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

inline std::vector<double> simulate_arma(std::uint64_t seed, std::size_t n, const std::vector<double>& phi,
                                         const std::vector<double>& theta, double sigma = 1.0,
                                         std::size_t burn_in = 200) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> eps(0.0, sigma);
    std::vector<double> x(n + burn_in, 0.0), e(n + burn_in, 0.0);
    for (std::size_t t = 0; t < x.size(); ++t) {
        e[t] = eps(rng);
        double v = e[t];
        for (std::size_t i = 0; i < phi.size() && i < t; ++i) v += phi[i] * x[t - 1 - i];
        for (std::size_t j = 0; j < theta.size() && j < t; ++j) v += theta[j] * e[t - 1 - j];
        x[t] = v;
    }
    return {x.begin() + static_cast<std::ptrdiff_t>(burn_in), x.end()};
}

}  // namespace hbtest
