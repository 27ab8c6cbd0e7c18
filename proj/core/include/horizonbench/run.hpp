#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "horizonbench/forecaster.hpp"
#include "horizonbench/report.hpp"
#include "horizonbench/scenario.hpp"

namespace horizonbench {

std::string_view version();

struct RunConfig {
    std::filesystem::path data;
    std::vector<Target> targets{std::begin(kAllTargets), std::end(kAllTargets)};
    /// Calendar split is the ContextRatio::calendar() entry.
    std::vector<ContextRatio> ratios{ContextRatio::multiple(2), ContextRatio::multiple(3),
                                     ContextRatio::multiple(4), ContextRatio::multiple(5)};
    std::vector<UserClass> classes{std::begin(kAllUserClasses), std::end(kAllUserClasses)};
    std::vector<ForecasterSpec> models = default_models();
    MetricConvention metrics = MetricConvention::density;
    std::uint64_t seed = 0;
    /// 0 means hardware concurrency.
    int jobs = 0;
    std::filesystem::path out;
    /// Address for external models that do not name their own bridge.
    std::string bridge;
    std::optional<Date> week10_start;
    std::optional<Date> july_start;
    std::optional<Date> q4_start;

    /// The four in-process models.
    static std::vector<ForecasterSpec> default_models();

    /// Throws InvalidArgument on empty lists, duplicates, bad jobs, missing
    /// data file or an external model with no bridge address.
    void validate() const;

    [[nodiscard]] std::vector<TargetWindow> target_windows() const;
    [[nodiscard]] int effective_jobs() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// FNV-1a 64 of "seed|model|target|class|ratio"; independent of which other
/// cells are in the run.
std::uint64_t cell_seed(std::uint64_t global_seed, const std::string& model_label, const Scenario& scenario);

/// Reads the series for every configured class, builds the scenario matrix
/// and checks it against the data. Throws before any forecasting happens.
struct PreparedRun {
    std::vector<DailySeries> series;  // parallel to config.classes
    std::vector<Scenario> scenarios;
};
PreparedRun prepare(const RunConfig& config);

/// Evaluates one model on one scenario; failures become error cells.
ResultCell evaluate_cell(const ForecasterSpec& spec, const Scenario& scenario, const DailySeries& series,
                         std::uint64_t seed, const ForecasterEnvironment& env,
                         MetricConvention metrics = MetricConvention::density);

struct RunResult {
    std::vector<ResultCell> cells;
    std::vector<std::filesystem::path> files;

    [[nodiscard]] bool all_ok() const;
    [[nodiscard]] int exit_code() const { return all_ok() ? 0 : 1; }
};

/// Full pipeline: prepare, evaluate every model x scenario cell on up to
/// effective_jobs() threads, then write the report files into config.out.
/// Cells are ordered model-major in config order, then scenario order.
RunResult run(const RunConfig& config);

/// Writes results.csv, errors.csv, table_<ratio>.{csv,json},
/// degradation_<metric>.csv, swarm_<metric>.csv and manifest.txt.
std::vector<std::filesystem::path> write_report(const RunConfig& config, std::span<const Scenario> scenarios,
                                                std::span<const ResultCell> cells);

/// key=value lines. The config keys reproduce the run; scenario and cell lines
/// after them are informational.
std::string manifest(const RunConfig& config, std::span<const Scenario> scenarios,
                     std::span<const ResultCell> cells);

/// Reads the config keys of a manifest back. Unknown keys are ignored.
RunConfig parse_manifest(std::istream& in);
RunConfig load_manifest(const std::filesystem::path& path);

/// "week10,july" etc.; throw InvalidArgument on unknown names.
std::vector<Target> parse_target_list(std::string_view text);
std::vector<ContextRatio> parse_ratio_list(std::string_view text);
std::vector<UserClass> parse_class_list(std::string_view text);
/// Comma-separated ForecasterSpec texts.
std::vector<ForecasterSpec> parse_model_list(std::string_view text);

}  // namespace horizonbench
