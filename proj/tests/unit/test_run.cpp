#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "horizonbench/error.hpp"
#include "horizonbench/run.hpp"

namespace hb = horizonbench;
namespace fs = std::filesystem;
using hbtest::ymd;

namespace {

fs::path uci() { return fs::path(hbtest::data_dir()) / "uci_day_2011.csv"; }

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("horizonbench_unit_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

hb::RunConfig small_config(const std::string& name) {
    hb::RunConfig cfg;
    cfg.data = uci();
    cfg.targets = {hb::Target::week10, hb::Target::july};
    cfg.ratios = {hb::ContextRatio::multiple(2), hb::ContextRatio::multiple(3)};
    cfg.models = {hb::ForecasterSpec::defaults(hb::ForecasterKind::seasonal_naive),
                  hb::ForecasterSpec::defaults(hb::ForecasterKind::quantized_sampler)};
    cfg.week10_start = ymd(2011, 3, 7);
    cfg.july_start = ymd(2011, 7, 1);
    cfg.seed = 17;
    cfg.jobs = 2;
    cfg.out = scratch(name);
    return cfg;
}

}  // namespace

TEST_SUITE("run") {
    TEST_CASE("cell seeds depend only on their own cell") {
        auto a = hb::make_scenario(hb::default_target(hb::Target::july), hb::UserClass::casual,
                                   hb::ContextRatio::multiple(2));
        auto b = hb::make_scenario(hb::default_target(hb::Target::july), hb::UserClass::registered,
                                   hb::ContextRatio::multiple(2));
        CHECK(hb::cell_seed(1, "arima", a) == hb::cell_seed(1, "arima", a));
        CHECK(hb::cell_seed(1, "arima", a) != hb::cell_seed(1, "arima", b));
        CHECK(hb::cell_seed(1, "arima", a) != hb::cell_seed(2, "arima", a));
        CHECK(hb::cell_seed(1, "arima", a) != hb::cell_seed(1, "decomposition", a));
    }

    TEST_CASE("list parsers") {
        CHECK(hb::parse_target_list("week10,q4") == std::vector<hb::Target>{hb::Target::week10, hb::Target::q4});
        CHECK(hb::parse_ratio_list("2,calendar").back().is_calendar());
        CHECK(hb::parse_class_list("registered").size() == 1);
        CHECK(hb::parse_model_list("arima,seasonal_naive").size() == 2);
        CHECK_THROWS_AS(hb::parse_target_list("week11"), hb::InvalidArgument);
        CHECK_THROWS_AS(hb::parse_ratio_list("7"), hb::InvalidArgument);
        CHECK_THROWS_AS(hb::parse_class_list("members"), hb::InvalidArgument);
        CHECK_THROWS_AS(hb::parse_model_list("lstm"), hb::InvalidArgument);
    }

    TEST_CASE("config validation") {
        auto cfg = small_config("validate");
        CHECK_NOTHROW(cfg.validate());
        auto missing = cfg;
        missing.data = "/nonexistent/day.csv";
        CHECK_THROWS_WITH_AS(missing.validate(), doctest::Contains("data file not found"), hb::InvalidArgument);
        auto dup = cfg;
        dup.ratios.push_back(hb::ContextRatio::multiple(2));
        CHECK_THROWS_AS(dup.validate(), hb::InvalidArgument);
        auto external = cfg;
        external.models.push_back(hb::ForecasterSpec::defaults(hb::ForecasterKind::external));
        CHECK_THROWS_WITH_AS(external.validate(), doctest::Contains("needs --bridge"), hb::InvalidArgument);
        external.bridge = "tcp://127.0.0.1:9";
        CHECK_NOTHROW(external.validate());
        auto jobs = cfg;
        jobs.jobs = -1;
        CHECK_THROWS_AS(jobs.validate(), hb::InvalidArgument);
    }

    TEST_CASE("prepare fails before forecasting on unsupported windows") {
        auto cfg = small_config("prepare");
        cfg.week10_start.reset();  // default anchor is in 2012, beyond the file
        CHECK_THROWS_AS(hb::prepare(cfg), hb::Error);
        CHECK_FALSE(fs::exists(cfg.out));
    }

    TEST_CASE("manifest round trip") {
        auto cfg = small_config("manifest");
        cfg.metrics = hb::MetricConvention::naive_scaled;
        cfg.bridge = "tcp://localhost:5000";
        const auto prep = hb::prepare(cfg);
        std::istringstream in(hb::manifest(cfg, prep.scenarios, {}));
        CHECK(hb::parse_manifest(in) == cfg);
        std::istringstream bad("data\n");
        CHECK_THROWS_AS(hb::parse_manifest(bad), hb::InvalidArgument);
    }

    TEST_CASE("small run is complete and deterministic across job counts") {
        auto cfg = small_config("run_a");
        auto first = hb::run(cfg);
        CHECK(first.all_ok());
        CHECK(first.cells.size() == 2 * 2 * 2 * 2);
        CHECK(first.cells.front().model == "seasonal_naive");
        const auto results = slurp(cfg.out / "results.csv");

        auto again = small_config("run_b");
        again.jobs = 1;
        hb::run(again);
        CHECK(slurp(again.out / "results.csv") == results);
        CHECK(fs::exists(again.out / "manifest.txt"));

        auto replay = hb::load_manifest(cfg.out / "manifest.txt");
        replay.out = scratch("run_c");
        hb::run(replay);
        CHECK(slurp(replay.out / "results.csv") == results);
        fs::remove_all(cfg.out);
        fs::remove_all(again.out);
        fs::remove_all(replay.out);
    }

    TEST_CASE("evaluate_cell turns failures into error cells") {
        auto series = hbtest::series_of(std::vector<std::int64_t>(40, 0));
        auto s = hb::make_scenario(hb::make_target(hb::Target::week10, ymd(2011, 1, 30)), hb::UserClass::casual,
                                   hb::ContextRatio::multiple(2));
        auto cell = hb::evaluate_cell(hb::ForecasterSpec::defaults(hb::ForecasterKind::seasonal_naive), s, series, 1,
                                      {});
        CHECK_FALSE(cell.ok());
        CHECK_FALSE(cell.error.empty());
    }
}
