// horizonbench: run the forecasting benchmark matrix and write the report files.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "horizonbench/error.hpp"
#include "horizonbench/report.hpp"
#include "horizonbench/run.hpp"

namespace hb = horizonbench;

namespace {

constexpr int kConfigError = 2;

std::optional<hb::Date> date_flag(const std::string& text, const char* name) {
    if (text.empty()) return std::nullopt;
    return hb::require_date(text, name);
}

/// Degradation of published metric tables under both column labelings.
int reference_mode(const std::filesystem::path& tables, const std::filesystem::path& out) {
    std::ifstream in(tables);
    if (!in) throw hb::InvalidArgument("cannot read " + tables.string());
    const auto entries = hb::parse_reference_tables(in);
    std::filesystem::create_directories(out);
    for (hb::Metric m : hb::kAllMetrics) {
        const auto table = hb::degradation_table(entries, m);
        for (auto labeling : {hb::ColumnLabeling::as_labeled, hb::ColumnLabeling::swapped}) {
            const auto path = out / ("degradation_" + std::string(hb::to_string(m)) + "_" +
                                     std::string(hb::to_string(labeling)) + ".csv");
            std::ofstream(path, std::ios::binary) << hb::to_csv(hb::relabel(table, labeling));
            std::cout << path.string() << "\n";
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Forecasting benchmark harness: scenarios x models -> MASE/WQL/EMD tables"};
    app.set_version_flag("--version", std::string(hb::version()));

    hb::RunConfig cfg;
    std::string data, targets, ratios, classes, models, out, bridge, replay, reference;
    std::string week10, july, q4, convention = "density";
    bool calendar_split = false;
    std::uint64_t seed = 0;
    int jobs = 0;

    app.add_option("--data", data, "Daily CSV (date,casual,registered) or raw rental CSV");
    app.add_option("--targets", targets, "Comma list of week10,july,q4")->default_str("week10,july,q4");
    app.add_option("--ratios", ratios, "Comma list of context ratios 2..5")->default_str("2,3,4,5");
    app.add_option("--classes", classes, "Comma list of casual,registered")->default_str("casual,registered");
    app.add_option("--models", models,
                   "Comma list of model specs, each 'kind' or 'kind;key=value;...' "
                   "(seasonal_naive, arima, decomposition, quantized_sampler, external)")
        ->default_str("arima,quantized_sampler,seasonal_naive,decomposition");
    app.add_option("--metric-convention", convention,
                   "density: lag-7 MASE, unit-mass EMD over days; "
                   "naive-scaled: lag-1 MASE, value-distribution EMD over the lag-1 naive MAE")
        ->check(CLI::IsMember({"density", "naive-scaled", "naive_scaled"}))
        ->default_str("density");
    app.add_flag("--calendar-split", calendar_split, "Also run the calendar-boundary context split");
    app.add_option("--seed", seed, "Global seed")->default_val(0);
    app.add_option("--jobs", jobs, "Concurrent cells (0 = all cores)")->default_val(0)->check(CLI::NonNegativeNumber);
    app.add_option("--out", out, "Output directory (default: $HORIZONBENCH_OUT)");
    app.add_option("--bridge", bridge, "External model bridge: tcp://host:port or a shell command");
    app.add_option("--week10-start", week10, "Override the Week10 target start (YYYY-MM-DD)");
    app.add_option("--july-start", july, "Override the July target start (YYYY-MM-DD)");
    app.add_option("--q4-start", q4, "Override the Q4 target start (YYYY-MM-DD)");
    auto* replay_opt = app.add_option("--replay", replay, "Re-run the configuration recorded in a manifest.txt");
    app.add_option("--reference-tables", reference,
                   "Compute degradation tables from published metric values instead of running models")
        ->excludes(replay_opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (out.empty()) {
            if (const char* env = std::getenv("HORIZONBENCH_OUT"); env && *env) out = env;
        }
        if (!reference.empty()) {
            if (out.empty()) throw hb::InvalidArgument("no output directory given (--out or HORIZONBENCH_OUT)");
            return reference_mode(reference, out);
        }

        if (!replay.empty()) {
            cfg = hb::load_manifest(replay);
            if (!out.empty()) cfg.out = out;
            if (app.count("--jobs")) cfg.jobs = jobs;
        } else {
            cfg.data = data;
            if (!targets.empty()) cfg.targets = hb::parse_target_list(targets);
            if (!ratios.empty()) cfg.ratios = hb::parse_ratio_list(ratios);
            if (!classes.empty()) cfg.classes = hb::parse_class_list(classes);
            if (!models.empty()) cfg.models = hb::parse_model_list(models);
            if (calendar_split) {
                const auto cal = hb::ContextRatio::calendar();
                if (std::find(cfg.ratios.begin(), cfg.ratios.end(), cal) == cfg.ratios.end()) cfg.ratios.push_back(cal);
            }
            cfg.metrics = *hb::parse_metric_convention(convention);
            cfg.seed = seed;
            cfg.jobs = jobs;
            cfg.out = out;
            cfg.bridge = bridge;
            cfg.week10_start = date_flag(week10, "--week10-start");
            cfg.july_start = date_flag(july, "--july-start");
            cfg.q4_start = date_flag(q4, "--q4-start");
        }
        if (cfg.out.empty()) throw hb::InvalidArgument("no output directory given (--out or HORIZONBENCH_OUT)");

        const auto result = hb::run(cfg);
        std::size_t failed = 0;
        for (const auto& cell : result.cells) {
            if (cell.ok()) continue;
            ++failed;
            std::cerr << "cell failed: " << cell.model << " " << cell.scenario.id() << ": " << cell.error << "\n";
        }
        std::cout << result.cells.size() << " cells, " << failed << " failed; results in " << cfg.out.string()
                  << "\n";
        return result.exit_code();
    } catch (const hb::InvalidArgument& e) {
        std::cerr << "horizonbench: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "horizonbench: " << e.what() << "\n";
        return kConfigError;
    }
}
