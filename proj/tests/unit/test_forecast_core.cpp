#include <doctest.h>

#include <cmath>
#include <map>
#include <random>

#include "fixtures.hpp"
#include "horizonbench/error.hpp"
#include "horizonbench/forecaster.hpp"
#include "horizonbench/quantile_forecast.hpp"
#include "horizonbench/quantized_sampler.hpp"
#include "horizonbench/seasonal_naive.hpp"

namespace hb = horizonbench;
using hbtest::ymd;

namespace {

void check_monotone(const hb::QuantileForecast& f) {
    for (std::size_t d = 0; d < f.horizon(); ++d) {
        for (std::size_t k = 1; k < hb::kNumQuantiles; ++k) CHECK(f.at(k - 1, d) <= f.at(k, d));
    }
}

hb::DailySeries noisy_weekly(std::uint64_t seed, std::size_t n) {
    std::mt19937_64 rng(seed);
    std::poisson_distribution<int> noise(30);
    std::vector<std::int64_t> counts(n);
    for (std::size_t i = 0; i < n; ++i) counts[i] = 50 + 20 * static_cast<std::int64_t>(i % 7) + noise(rng);
    return hbtest::series_of(counts);
}

}  // namespace

TEST_SUITE("forecast_core") {
    TEST_CASE("QuantileForecast construction checks") {
        CHECK_THROWS_WITH_AS(hb::QuantileForecast(ymd(2011, 1, 1), 0, {}), doctest::Contains("insufficient horizon"),
                             hb::InvalidArgument);
        std::vector<double> v(9, 1.0);
        v[3] = 0.5;
        CHECK_THROWS_WITH_AS(hb::QuantileForecast(ymd(2011, 1, 1), 1, v), doctest::Contains("not monotone"),
                             hb::Error);
        std::vector<double> nan(9, 1.0);
        nan[0] = std::nan("");
        CHECK_THROWS_AS(hb::QuantileForecast(ymd(2011, 1, 1), 1, nan), hb::Error);
        std::vector<double> path{-2.0, 3.0};
        auto d = hb::QuantileForecast::degenerate(ymd(2011, 1, 1), path).clamped_non_negative();
        CHECK(d.at(0, 0) == 0.0);
        CHECK(d.at(8, 1) == 3.0);
    }

    TEST_CASE("empirical quantiles") {
        std::vector<double> one_to_hundred(100);
        for (int i = 0; i < 100; ++i) one_to_hundred[static_cast<std::size_t>(i)] = i + 1;
        CHECK(hb::empirical_quantile(one_to_hundred, 0.1) == doctest::Approx(10.9).epsilon(1e-12));
        CHECK(hb::empirical_quantile(one_to_hundred, 0.5) == doctest::Approx(50.5).epsilon(1e-12));

        Eigen::MatrixXd two(2, 1);
        two << 0.0, 10.0;
        auto q = hb::trajectories_to_quantiles(two, ymd(2011, 1, 1));
        CHECK(q.at(hb::kMedianIndex, 0) == doctest::Approx(5.0));
        CHECK(q.at(0, 0) == doctest::Approx(1.0));

        Eigen::MatrixXd single(1, 3);
        single << 4.0, 5.0, 6.0;
        auto s = hb::trajectories_to_quantiles(single, ymd(2011, 1, 1));
        for (std::size_t k = 0; k < hb::kNumQuantiles; ++k) CHECK(s.at(k, 2) == 6.0);
    }

    TEST_CASE("seasonal naive repeats the last season block") {
        std::vector<double> ctx{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
        CHECK(hb::seasonal_naive_point(ctx, 7, 7) == std::vector<double>{8, 9, 10, 11, 12, 13, 14});
        CHECK(hb::seasonal_naive_point(ctx, 14, 7) ==
              std::vector<double>{8, 9, 10, 11, 12, 13, 14, 8, 9, 10, 11, 12, 13, 14});
        CHECK(hb::seasonal_naive_point(ctx, 3, 7) == std::vector<double>{8, 9, 10});
        CHECK_THROWS_WITH_AS(hb::seasonal_naive_point(std::vector<double>{1, 2, 3}, 2, 7),
                             doctest::Contains("insufficient context"), hb::Error);
        CHECK_THROWS_AS(hb::seasonal_naive_point(ctx, 2, 0), hb::InvalidArgument);
    }

    TEST_CASE("seasonal naive forecast is degenerate") {
        auto ctx = hbtest::series_of({5, 5, 5, 10, 20, 30, 40, 50, 60, 70});
        auto r = hb::forecast(hb::ForecasterSpec::defaults(hb::ForecasterKind::seasonal_naive), ctx, 3, 0);
        CHECK(r.forecast.start_date() == ymd(2011, 1, 11));
        for (std::size_t k = 0; k < hb::kNumQuantiles; ++k) {
            CHECK(std::vector<double>(r.forecast.row(k).begin(), r.forecast.row(k).end()) ==
                  std::vector<double>{10, 20, 30});
        }
    }

    TEST_CASE("seasonal naive depends only on the final week") {
        auto long_ctx = noisy_weekly(3, 70);
        auto short_ctx = long_ctx.slice(42, 28);
        auto spec = hb::ForecasterSpec::defaults(hb::ForecasterKind::seasonal_naive);
        CHECK(hb::forecast(spec, long_ctx, 31, 1).forecast == hb::forecast(spec, short_ctx, 31, 99).forecast);
    }

    TEST_CASE("every kind rejects a zero horizon") {
        auto ctx = noisy_weekly(5, 60);
        for (auto kind : {hb::ForecasterKind::seasonal_naive, hb::ForecasterKind::arima,
                          hb::ForecasterKind::decomposition, hb::ForecasterKind::quantized_sampler}) {
            CHECK_THROWS_WITH_AS(hb::forecast(hb::ForecasterSpec::defaults(kind), ctx, 0, 0),
                                 doctest::Contains("insufficient horizon"), hb::InvalidArgument);
        }
    }

    TEST_CASE("tokenize arithmetic") {
        hb::TokenizerConfig cfg;
        std::vector<double> ctx{2.0, 2.0, 2.0};
        auto t = hb::tokenize(ctx, cfg);
        CHECK(t.scale == 2.0);
        CHECK(t.tokens[0] == 2184);
        std::vector<double> spike(30, 1.0);
        spike.push_back(1e9);  // about 31x the mean scale, past the clamp
        CHECK(hb::tokenize(spike, cfg).tokens.back() == cfg.num_bins - 1);
        std::vector<double> zeros{0.0, 0.0};
        CHECK_THROWS_WITH_AS(hb::tokenize(zeros, cfg), doctest::Contains("zero scale"), hb::Error);
        CHECK_THROWS_AS((hb::TokenizerConfig{1, -1, 1}.validate()), hb::InvalidArgument);
        CHECK_THROWS_AS((hb::TokenizerConfig{8, 1, 1}.validate()), hb::InvalidArgument);
    }

    TEST_CASE("tokenize round trip within half a bin") {
        hb::TokenizerConfig cfg;
        std::mt19937_64 rng(21);
        auto values = hbtest::uniform_vector(rng, 10000, 0.0, 1000.0);
        auto t = hb::tokenize(values, cfg);
        const double half = cfg.bin_width() / 2.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const double scaled = values[i] / t.scale;
            CHECK(std::abs(hb::dequantize(t.tokens[i], cfg) - scaled) <= half + 1e-12);
        }
    }

    TEST_CASE("sample_trajectories contracts") {
        std::vector<int> constant(20, 7);
        auto c = hb::sample_trajectories(constant, 10, 5, 3, 1);
        CHECK((c.array() == 7).all());

        std::vector<int> alternating;
        for (int i = 0; i < 30; ++i) alternating.push_back(i % 2 == 0 ? 3 : 9);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            auto a = hb::sample_trajectories(alternating, 12, 4, 1, seed);
            for (Eigen::Index s = 0; s < a.rows(); ++s) {
                for (Eigen::Index h = 0; h < a.cols(); ++h) CHECK(a(s, h) == (h % 2 == 0 ? 3 : 9));
            }
        }

        CHECK(hb::sample_trajectories(alternating, 5, 3, 2, 42) == hb::sample_trajectories(alternating, 5, 3, 2, 42));
        CHECK_THROWS_AS(hb::sample_trajectories(alternating, 5, 0, 2, 1), hb::InvalidArgument);
        CHECK_THROWS_AS(hb::sample_trajectories(std::vector<int>{1, 2}, 5, 1, 2, 1), hb::InvalidArgument);
    }

    TEST_CASE("order 0 draws from the add-one smoothed histogram") {
        // Counts 6 / 3 / 1 become 7 / 4 / 2 out of 13.
        std::vector<int> tokens{1, 1, 1, 1, 1, 1, 2, 2, 2, 3};
        auto draws = hb::sample_trajectories(tokens, 1000, 60, 0, 5);
        std::map<int, double> freq;
        for (Eigen::Index i = 0; i < draws.size(); ++i) freq[draws(i)] += 1.0 / static_cast<double>(draws.size());
        CHECK(freq.size() == 3);
        CHECK(freq[1] == doctest::Approx(7.0 / 13.0).epsilon(0.02));
        CHECK(freq[2] == doctest::Approx(4.0 / 13.0).epsilon(0.03));
        CHECK(freq[3] == doctest::Approx(2.0 / 13.0).epsilon(0.05));
    }

    TEST_CASE("constant context collapses within half a bin") {
        hb::QuantizedSamplerForecaster f(hb::TokenizerConfig{}, 20, 7);
        auto r = f.forecast(hbtest::series_of(std::vector<std::int64_t>(30, 5)), 14, 9);
        const double half = hb::TokenizerConfig{}.bin_width() / 2.0 * 5.0;
        for (std::size_t k = 0; k < hb::kNumQuantiles; ++k) {
            for (std::size_t d = 0; d < 14; ++d) CHECK(std::abs(r.forecast.at(k, d) - 5.0) <= half);
        }
    }

    TEST_CASE("sampler is seed-deterministic and monotone") {
        auto ctx = noisy_weekly(8, 93);
        auto spec = hb::ForecasterSpec::defaults(hb::ForecasterKind::quantized_sampler);
        auto a = hb::forecast(spec, ctx, 31, 1234).forecast;
        auto b = hb::forecast(spec, ctx, 31, 1234).forecast;
        CHECK(a == b);
        check_monotone(a);
        CHECK(a.horizon() == 31);
    }

    TEST_CASE("monotone quantiles for every model on random contexts") {
        for (std::uint64_t seed = 0; seed < 4; ++seed) {
            auto ctx = noisy_weekly(100 + seed, 60 + 10 * seed);
            for (auto kind : {hb::ForecasterKind::seasonal_naive, hb::ForecasterKind::arima,
                              hb::ForecasterKind::decomposition, hb::ForecasterKind::quantized_sampler}) {
                auto r = hb::forecast(hb::ForecasterSpec::defaults(kind), ctx, 31, seed);
                CHECK(r.forecast.horizon() == 31);
                check_monotone(r.forecast);
                for (std::size_t k = 0; k < hb::kNumQuantiles; ++k) {
                    for (double v : r.forecast.row(k)) CHECK(v >= 0.0);
                }
            }
        }
    }

    TEST_CASE("ForecasterSpec parsing and serialization") {
        auto s = hb::ForecasterSpec::parse("quantized_sampler;order=3;num_samples=50");
        CHECK(s.kind == hb::ForecasterKind::quantized_sampler);
        CHECK(s.get_int("order") == 3);
        CHECK(s.get_int("num_bins") == 4096);
        CHECK(s.serialize() == "quantized_sampler;high=15;low=-15;num_bins=4096;num_samples=50;order=3");
        CHECK(hb::ForecasterSpec::parse(s.serialize()) == s);
        CHECK(s.label() == "quantized_sampler");
        CHECK(hb::ForecasterSpec::parse("external;model=echo;bridge=tcp://localhost:9").label() == "external:echo");

        CHECK_THROWS_WITH_AS(hb::ForecasterSpec::parse("lstm"), doctest::Contains("unknown model"),
                             hb::InvalidArgument);
        CHECK_THROWS_WITH_AS(hb::ForecasterSpec::parse("arima;p_max=9"), doctest::Contains("invalid parameter"),
                             hb::InvalidArgument);
        CHECK_THROWS_WITH_AS(hb::ForecasterSpec::parse("arima;foo=1"), doctest::Contains("unknown parameter"),
                             hb::InvalidArgument);
        CHECK_THROWS_WITH_AS(hb::ForecasterSpec::parse("arima;p_max=1;p_max=2"),
                             doctest::Contains("duplicate parameter"), hb::InvalidArgument);
        CHECK_THROWS_AS(hb::ForecasterSpec::parse("quantized_sampler;low=5;high=1"), hb::InvalidArgument);
        CHECK_THROWS_AS(hb::ForecasterSpec::parse("seasonal_naive;season_length=abc"), hb::InvalidArgument);
        CHECK_THROWS_WITH_AS(hb::make_forecaster(hb::ForecasterSpec::defaults(hb::ForecasterKind::external)),
                             doctest::Contains("needs a bridge"), hb::InvalidArgument);
    }
}
