#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "horizonbench/error.hpp"
#include "horizonbench/report.hpp"

namespace hb = horizonbench;

namespace {

std::vector<hb::TableEntry> reference_entries() {
    std::ifstream in(hbtest::data_dir() + "/reference_tables.csv");
    REQUIRE(in);
    return hb::parse_reference_tables(in);
}

std::vector<hb::TableEntry> random_entries(std::mt19937_64& rng, const std::vector<std::string>& models) {
    std::uniform_int_distribution<int> tick(1, 40);
    std::vector<hb::TableEntry> out;
    for (const auto& model : models) {
        for (auto col : hb::default_columns()) {
            // Coarse grid so ties at the printed precision are common.
            out.push_back({model, col.target, col.user_class, hb::ContextRatio::multiple(2),
                           {tick(rng) * 0.05, tick(rng) * 0.05, tick(rng) * 0.05}});
        }
    }
    return out;
}

hb::ResultCell cell(const std::string& model, hb::Target t, hb::UserClass c, int ratio, std::optional<hb::MetricTriple> m,
                    std::string error = {}) {
    hb::ResultCell out{model, hb::make_scenario(hb::default_target(t), c, hb::ContextRatio::multiple(ratio)), m, 11, "",
                       std::move(error)};
    return out;
}

}  // namespace

TEST_SUITE("report") {
    TEST_CASE("table shape and minimum markers") {
        std::mt19937_64 rng(3);
        const std::vector<std::string> models{"arima", "prophet", "chronos", "seasonal_naive"};
        for (int trial = 0; trial < 50; ++trial) {
            auto entries = random_entries(rng, models);
            auto cols = hb::default_columns();
            auto table = hb::metric_table(entries, hb::ContextRatio::multiple(2), cols);
            REQUIRE(table.models.size() == 4);
            REQUIRE(table.columns.size() == 6);
            for (hb::Metric m : hb::kAllMetrics) {
                for (std::size_t c = 0; c < 6; ++c) {
                    double best = table.value(0, m, c);
                    for (std::size_t i = 1; i < 4; ++i) best = std::min(best, table.value(i, m, c));
                    for (std::size_t i = 0; i < 4; ++i) {
                        CHECK(table.is_min(i, m, c) ==
                              (hb::format_metric(table.value(i, m, c)) == hb::format_metric(best)));
                    }
                }
            }
            auto csv = hb::to_csv(table);
            CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
        }
    }

    TEST_CASE("single model marks every cell") {
        std::mt19937_64 rng(4);
        auto entries = random_entries(rng, {"only"});
        auto table = hb::metric_table(entries, hb::ContextRatio::multiple(2), hb::default_columns());
        for (hb::Metric m : hb::kAllMetrics) {
            for (std::size_t c = 0; c < 6; ++c) CHECK(table.is_min(0, m, c));
        }
    }

    TEST_CASE("published inputs reproduce the printed minima") {
        auto entries = reference_entries();
        CHECK(entries.size() == 120);
        auto cols = hb::default_columns();
        auto table = hb::metric_table(entries, hb::ContextRatio::multiple(2), cols);
        const auto col = static_cast<std::size_t>(
            std::find(cols.begin(), cols.end(), hb::TableColumn{hb::Target::week10, hb::UserClass::registered}) -
            cols.begin());
        const auto arima = static_cast<std::size_t>(
            std::find(table.models.begin(), table.models.end(), "arima") - table.models.begin());
        CHECK(hb::format_metric(table.value(arima, hb::Metric::wql, col)) == "0.1573");
        for (std::size_t i = 0; i < table.models.size(); ++i) {
            CHECK(table.is_min(i, hb::Metric::wql, col) == (i == arima));
        }
        CHECK(hb::to_csv(table).find("0.1573*") != std::string::npos);
        CHECK(hb::to_csv(table) == hb::to_csv(hb::metric_table(entries, hb::ContextRatio::multiple(2), cols)));
        CHECK(hb::to_json(table) == hb::to_json(hb::metric_table(entries, hb::ContextRatio::multiple(2), cols)));
    }

    TEST_CASE("missing cells make the table incomplete") {
        std::mt19937_64 rng(5);
        auto entries = random_entries(rng, {"a", "b"});
        entries.pop_back();
        CHECK_THROWS_WITH_AS(hb::metric_table(entries, hb::ContextRatio::multiple(2), hb::default_columns()),
                             doctest::Contains("incomplete run"), hb::Error);
        CHECK_THROWS_WITH_AS(hb::metric_table(entries, hb::ContextRatio::multiple(3), hb::default_columns()),
                             doctest::Contains("incomplete run"), hb::Error);
    }

    TEST_CASE("percent change examples") {
        CHECK(hb::format_percent(hb::percent_change(0.3414, 0.3065)) == "+11.4");
        CHECK(hb::format_percent(hb::percent_change(0.1807, 0.1345)) == "+34.3");
        CHECK(hb::format_percent(hb::percent_change(0.3368, 0.4065)) == "-17.1");
        CHECK(hb::percent_change(0.25, 0.25) == 0.0);
        CHECK(hb::format_percent(0.0) == "0.0");
        CHECK(hb::format_percent(-0.01) == "0.0");
        CHECK_THROWS_WITH_AS(hb::percent_change(1.0, 0.0), doctest::Contains("undefined percent change"), hb::Error);
    }

    TEST_CASE("half-even rounding and metric formatting") {
        CHECK(hb::round_half_even(0.25, 1) == 0.2);
        CHECK(hb::round_half_even(0.75, 1) == 0.8);
        CHECK(hb::round_half_even(-2.5, 0) == -2.0);
        CHECK(hb::format_percent(0.25) == "+0.2");
        CHECK(hb::format_metric(0.52505) != "");
        CHECK(hb::format_metric(0.5251) == "0.5251");
        CHECK(hb::format_metric(-0.00001) == "0.0000");
        CHECK(hb::format_metric(12.0) == "12.0000");
    }

    TEST_CASE("degradation map") {
        std::map<hb::ContextRatio, double> by{{hb::ContextRatio::multiple(2), 0.5},
                                              {hb::ContextRatio::multiple(3), 0.6},
                                              {hb::ContextRatio::multiple(4), 0.4}};
        auto d = hb::degradation(by, hb::ContextRatio::multiple(2));
        CHECK(d.at(hb::ContextRatio::multiple(2)) == 0.0);
        CHECK(d.at(hb::ContextRatio::multiple(3)) == doctest::Approx(20.0));
        CHECK(d.at(hb::ContextRatio::multiple(4)) == doctest::Approx(-20.0));
        CHECK_THROWS_AS(hb::degradation(by, hb::ContextRatio::multiple(5)), hb::Error);
    }

    TEST_CASE("degradation table and relabeling") {
        auto entries = reference_entries();
        auto table = hb::degradation_table(entries, hb::Metric::wql);
        // 4 models x 3 targets x 2 classes x 3 ratios.
        CHECK(table.rows.size() == 72);
        for (const auto& r : table.rows) {
            CHECK(r.ratio != hb::ContextRatio::multiple(2));
            CHECK_FALSE(r.ratio.is_calendar());
            CHECK(r.percent == doctest::Approx((r.value - r.baseline_value) / r.baseline_value * 100.0));
        }
        auto swapped = hb::relabel(table, hb::ColumnLabeling::swapped);
        CHECK(hb::relabel(swapped, hb::ColumnLabeling::swapped).rows.size() == table.rows.size());
        auto count = [](const hb::DegradationTable& t, hb::Target target) {
            return std::count_if(t.rows.begin(), t.rows.end(), [&](const auto& r) { return r.target == target; });
        };
        CHECK(count(swapped, hb::Target::july) == count(table, hb::Target::q4));
        CHECK(count(swapped, hb::Target::week10) == count(table, hb::Target::week10));
        CHECK(hb::relabel(table, hb::ColumnLabeling::as_labeled).rows.size() == table.rows.size());

        std::istringstream back(hb::to_csv(table));
        auto rows = hb::parse_degradation_csv(back);
        REQUIRE(rows.size() == table.rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].model == table.rows[i].model);
            CHECK(rows[i].ratio == table.rows[i].ratio);
            CHECK(std::abs(rows[i].percent - table.rows[i].percent) <= 0.05 + 1e-12);
        }
    }

    TEST_CASE("published degradation file parses") {
        std::ifstream in(hbtest::data_dir() + "/reference_degradation.csv");
        auto rows = hb::parse_degradation_csv(in);
        CHECK(rows.size() == 36);
        CHECK(rows[0].target == hb::Target::july);
        CHECK(rows[0].percent == doctest::Approx(11.4));
        std::istringstream bad("h\njuly,arima,casual,3:1,abc\n");
        CHECK_THROWS_WITH_AS(hb::parse_degradation_csv(bad), doctest::Contains("line 2"), hb::InvalidArgument);
    }

    TEST_CASE("swarm data") {
        auto entries = reference_entries();
        auto swarm = hb::swarm_data(entries, hb::Metric::mase);
        CHECK(swarm.size() == entries.size());
        for (std::size_t i = 1; i < swarm.size(); ++i) {
            const auto& a = swarm[i - 1];
            const auto& b = swarm[i];
            CHECK(std::tie(a.target, a.user_class, a.model, a.ratio) <= std::tie(b.target, b.user_class, b.model, b.ratio));
        }
        CHECK(hb::swarm_data(std::vector<hb::TableEntry>{}, hb::Metric::wql).empty());
        CHECK(hb::to_csv(std::span<const hb::SwarmRecord>{}) == "model,target,user_class,ratio,score\n");
    }

    TEST_CASE("results and errors CSV") {
        std::vector<hb::ResultCell> cells{
            cell("arima", hb::Target::week10, hb::UserClass::casual, 2, hb::MetricTriple{0.5, 1.25, 0.125}),
            cell("prophet", hb::Target::july, hb::UserClass::registered, 3, std::nullopt, "fit failed: \"x\"\nmore"),
        };
        CHECK(hb::results_csv(cells) ==
              "model,target,user_class,ratio,emd,mase,wql,seed\n"
              "arima,week10,casual,2:1,0.5000,1.2500,0.1250,11\n"
              "prophet,july,registered,3:1,NA,NA,NA,11\n");
        CHECK(hb::errors_csv(cells) ==
              "model,target,user_class,ratio,seed,error\n"
              "prophet,july,registered,3:1,11,\"fit failed: \"\"x\"\" more\"\n");
        auto entries = hb::entries_from_cells(cells);
        REQUIRE(entries.size() == 1);
        CHECK(entries[0].metrics.mase == 1.25);
    }

    TEST_CASE("reference table errors") {
        std::istringstream dup(
            "h\na,2,week10,casual,emd,1\na,2,week10,casual,emd,2\n");
        CHECK_THROWS_WITH_AS(hb::parse_reference_tables(dup), doctest::Contains("duplicate"), hb::InvalidArgument);
        std::istringstream partial("h\na,2,week10,casual,emd,1\n");
        CHECK_THROWS_WITH_AS(hb::parse_reference_tables(partial), doctest::Contains("missing a metric"),
                             hb::InvalidArgument);
        std::istringstream bad_metric("h\na,2,week10,casual,rmse,1\n");
        CHECK_THROWS_AS(hb::parse_reference_tables(bad_metric), hb::InvalidArgument);
    }
}
