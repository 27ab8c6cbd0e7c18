#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "horizonbench/bridge.hpp"
#include "horizonbench/error.hpp"
#include "horizonbench/forecaster.hpp"

namespace hb = horizonbench;
using hbtest::ymd;

namespace {

const std::string kEcho = HORIZONBENCH_ECHO_BRIDGE;

hb::BridgeRequest random_request(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> len(1, 200), h(1, 120), days(0, 4000);
    std::uniform_real_distribution<double> v(-1e6, 1e6);
    hb::BridgeRequest r;
    r.id = "req-" + std::to_string(rng());
    r.model = rng() % 2 ? "chronos-t5-small" : "m\"odel\\ \xc3\xa9";
    r.context.resize(static_cast<std::size_t>(len(rng)));
    for (auto& x : r.context) x = v(rng);
    r.start_date = hb::add_days(ymd(2010, 1, 1), days(rng));
    r.horizon = h(rng);
    r.num_samples = h(rng);
    r.seed = rng();
    return r;
}

hb::DailySeries context_of(std::vector<std::int64_t> counts) { return hbtest::series_of(counts); }

}  // namespace

TEST_SUITE("bridge") {
    TEST_CASE("request round trip on 1000 random messages") {
        std::mt19937_64 rng(99);
        for (int i = 0; i < 1000; ++i) {
            auto r = random_request(rng);
            const auto line = hb::encode(r);
            CHECK(line.find('\n') == std::string::npos);
            CHECK(hb::decode_request(line) == r);
        }
    }

    TEST_CASE("response round trip") {
        hb::BridgeResponse ok{"a", true, {{1.5, 2.0}, {0.1, 1e300}}, ""};
        CHECK(hb::decode_response(hb::encode(ok)) == ok);
        hb::BridgeResponse err{"b", false, {}, "out of memory"};
        CHECK(hb::decode_response(hb::encode(err)) == err);
    }

    TEST_CASE("optional request fields take defaults") {
        auto r = hb::decode_request(R"({"id":"x","model":"m","context":[1,2],"start_date":"2012-01-01","horizon":3})");
        CHECK(r.num_samples == 20);
        CHECK(r.seed == 0);
        CHECK(r.quantiles.size() == hb::kNumQuantiles);
    }

    TEST_CASE("malformed messages") {
        const char* bad[] = {
            "",
            "not json",
            "[1,2]",
            R"({"model":"m","context":[1],"start_date":"2012-01-01","horizon":1})",
            R"({"id":"x","model":"m","context":"1","start_date":"2012-01-01","horizon":1})",
            R"({"id":"x","model":"m","context":[1,"a"],"start_date":"2012-01-01","horizon":1})",
            R"({"id":"x","model":"m","context":[1],"start_date":"2012-13-01","horizon":1})",
            R"({"id":"x","model":"m","context":[1],"start_date":"2012-01-01","horizon":0})",
            R"({"id":"x","model":"m","context":[1],"start_date":"2012-01-01","horizon":1.5})",
            R"({"id":"x","model":"m","context":[1],"start_date":"2012-01-01","horizon":2,"seed":-1})",
        };
        for (const char* line : bad) {
            CHECK_THROWS_WITH_AS(hb::decode_request(line), doctest::Contains("malformed bridge message"),
                                 hb::InvalidArgument);
        }
        CHECK_THROWS_AS(hb::decode_response(R"({"id":"x","status":"maybe"})"), hb::InvalidArgument);
        CHECK_THROWS_AS(hb::decode_response(R"({"id":"x","status":"ok"})"), hb::InvalidArgument);
        hb::BridgeRequest nan_req;
        nan_req.context = {std::nan("")};
        CHECK_THROWS_AS(hb::encode(nan_req), hb::InvalidArgument);
    }

    TEST_CASE("truncated messages never decode") {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 200; ++i) {
            const auto line = hb::encode(random_request(rng));
            const auto cut = static_cast<std::size_t>(rng() % line.size());
            CHECK_THROWS_AS(hb::decode_request(line.substr(0, cut)), hb::InvalidArgument);
        }
    }

    TEST_CASE("subprocess channel talks to the echo bridge") {
        auto channel = hb::open_channel(kEcho, std::chrono::seconds(10));
        hb::BridgeRequest r;
        r.id = "one";
        r.model = "echo";
        r.context = {3, 4, 5};
        r.start_date = ymd(2012, 1, 1);
        r.horizon = 4;
        auto resp = hb::decode_response(channel->round_trip(hb::encode(r)));
        CHECK(resp.ok);
        CHECK(resp.id == "one");
        REQUIRE(resp.quantile_rows.size() == 9);
        CHECK(resp.quantile_rows[8] == std::vector<double>(4, 5.0));

        auto garbage = hb::decode_response(channel->round_trip("{{{"));
        CHECK_FALSE(garbage.ok);
        CHECK(garbage.id == "unknown");

        auto zero = hb::decode_response(channel->round_trip(R"({"id":"z","context":[1],"horizon":0})"));
        CHECK_FALSE(zero.ok);
        CHECK(zero.id == "z");
    }

    TEST_CASE("external forecaster over the echo bridge") {
        auto pool = std::make_shared<hb::BridgePool>(kEcho, 2, std::chrono::seconds(10));
        auto ctx = context_of({5, 6, 7, 9});
        hb::ExternalForecaster f(pool, "echo");
        auto q = f.forecast(ctx, 3, 1).forecast;
        CHECK(q.start_date() == ymd(2011, 1, 5));
        for (std::size_t k = 0; k < hb::kNumQuantiles; ++k) CHECK(q.at(k, 2) == 9.0);

        // Same answer as the in-process seasonal naive with season length 1.
        auto spec = hb::ForecasterSpec::parse("seasonal_naive;season_length=1");
        CHECK(hb::forecast(spec, ctx, 3, 1).forecast == q);

        CHECK_THROWS_WITH_AS(hb::ExternalForecaster(pool, "fail").forecast(ctx, 3, 1),
                             doctest::Contains("fit failed"), hb::Error);
        CHECK_THROWS_WITH_AS(hb::ExternalForecaster(pool, "short").forecast(ctx, 3, 1),
                             doctest::Contains("bridge failure"), hb::Error);
        CHECK_THROWS_WITH_AS(hb::ExternalForecaster(pool, "wrong_id").forecast(ctx, 3, 1),
                             doctest::Contains("does not match"), hb::Error);
        CHECK_THROWS_WITH_AS(hb::ExternalForecaster(pool, "crash").forecast(ctx, 3, 1),
                             doctest::Contains("bridge failure"), hb::Error);
        // The pool replaces the dead channel.
        CHECK(f.forecast(ctx, 2, 1).forecast.horizon() == 2);
        CHECK_THROWS_AS(f.forecast(ctx, 0, 1), hb::InvalidArgument);
    }

    TEST_CASE("external spec routes through make_forecaster") {
        auto spec = hb::ForecasterSpec::parse("external;model=echo;bridge=" + kEcho);
        CHECK(spec.label() == "external:echo");
        auto q = hb::forecast(spec, context_of({1, 2}), 5, 0).forecast;
        CHECK(q.at(0, 4) == 2.0);
    }

    TEST_CASE("unreachable bridges fail cleanly") {
        auto pool = std::make_shared<hb::BridgePool>("tcp://127.0.0.1:1", 1, std::chrono::seconds(2));
        hb::ExternalForecaster f(pool, "echo");
        CHECK_THROWS_WITH_AS(f.forecast(context_of({1, 2}), 1, 0), doctest::Contains("bridge failure"), hb::Error);
        hb::SubprocessChannel dead("exit 0", std::chrono::seconds(2));
        CHECK_THROWS_WITH_AS(dead.round_trip("{}"), doctest::Contains("bridge failure"), hb::Error);
    }
}
