#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "horizonbench/metrics.hpp"
#include "horizonbench/scenario.hpp"

namespace horizonbench {

enum class Metric { emd, mase, wql };

inline constexpr Metric kAllMetrics[] = {Metric::emd, Metric::mase, Metric::wql};

std::string_view to_string(Metric m);
std::optional<Metric> parse_metric(std::string_view text);
double value_of(const MetricTriple& triple, Metric m);

/// Outcome of one model x scenario evaluation. Exactly one of `metrics` and
/// `error` is set.
struct ResultCell {
    std::string model;
    Scenario scenario;
    std::optional<MetricTriple> metrics;
    std::uint64_t seed = 0;
    std::string diagnostics;
    std::string error;

    [[nodiscard]] bool ok() const { return metrics.has_value(); }
};

/// A scored (model, target, class, ratio) point, from a run or from a
/// published table.
struct TableEntry {
    std::string model;
    Target target;
    UserClass user_class;
    ContextRatio ratio;
    MetricTriple metrics;
};

/// Successful cells only.
std::vector<TableEntry> entries_from_cells(std::span<const ResultCell> cells);

struct TableColumn {
    Target target;
    UserClass user_class;

    [[nodiscard]] std::string label() const;
    friend bool operator==(const TableColumn&, const TableColumn&) = default;
};

/// Week10/July/Q4 x casual/registered.
std::vector<TableColumn> default_columns();

/// Rows are model x {EMD, MASE, WQL}; columns as requested.
struct MetricTable {
    ContextRatio ratio;
    std::vector<TableColumn> columns;
    /// In order of first appearance in the input.
    std::vector<std::string> models;
    /// values[model][metric][column]
    std::vector<std::array<std::vector<double>, 3>> values;

    [[nodiscard]] double value(std::size_t model, Metric m, std::size_t column) const {
        return values[model][static_cast<std::size_t>(m)][column];
    }
    /// True when this model attains the column minimum for the metric, compared
    /// at the printed precision (ties all marked).
    [[nodiscard]] bool is_min(std::size_t model, Metric m, std::size_t column) const;
};

/// Throws Error "incomplete run" when a (model, column) is missing.
MetricTable metric_table(std::span<const TableEntry> entries, ContextRatio ratio,
                         std::span<const TableColumn> columns);

/// Metrics at four decimals; column minima carry a trailing '*'.
std::string to_csv(const MetricTable& table);
std::string to_json(const MetricTable& table);

/// "0.5251".
std::string format_metric(double v);

/// Rounds half to even at `decimals` places.
double round_half_even(double v, int decimals);

/// Signed one-decimal percent, half-even: "+34.4", "-17.2", "0.0".
std::string format_percent(double v);

/// (value - baseline) / baseline * 100. Error "undefined percent change" for a
/// zero baseline.
double percent_change(double value, double baseline);

/// Percent change of every ratio against `baseline`, which must be present.
std::map<ContextRatio, double> degradation(const std::map<ContextRatio, double>& by_ratio, ContextRatio baseline);

struct DegradationRow {
    std::string model;
    Target target;
    UserClass user_class;
    ContextRatio ratio;
    double baseline_value;
    double value;
    double percent;
};

struct DegradationTable {
    Metric metric;
    ContextRatio baseline;
    std::vector<DegradationRow> rows;
};

/// One row per (model, target, class) and non-baseline integer ratio, where
/// the baseline value exists. Sorted by target, model, class, ratio.
DegradationTable degradation_table(std::span<const TableEntry> entries, Metric metric,
                                   ContextRatio baseline = ContextRatio::multiple(2));

/// Published degradation tables label July and Q4 opposite to the metric
/// tables; `swapped` relabels rows July <-> Q4 to test that reading.
enum class ColumnLabeling { as_labeled, swapped };
std::string_view to_string(ColumnLabeling l);
DegradationTable relabel(DegradationTable table, ColumnLabeling labeling);

/// target,model,user_class,ratio,percent_change
std::string to_csv(const DegradationTable& table);

/// Reads the to_csv() format back; value fields are NaN.
std::vector<DegradationRow> parse_degradation_csv(std::istream& in);

struct SwarmRecord {
    std::string model;
    Target target;
    UserClass user_class;
    ContextRatio ratio;
    double score;
};

/// One record per entry, sorted by (target, class, model, ratio).
std::vector<SwarmRecord> swarm_data(std::span<const TableEntry> entries, Metric metric);

/// model,target,user_class,ratio,score
std::string to_csv(std::span<const SwarmRecord> records);

/// model,target,user_class,ratio,emd,mase,wql,seed; NA metrics for failed cells.
std::string results_csv(std::span<const ResultCell> cells);

/// model,target,user_class,ratio,seed,error for failed cells only.
std::string errors_csv(std::span<const ResultCell> cells);

/// Long-format published values: model,ratio,target,user_class,metric,value.
/// Rows for one (model, ratio, target, class) must cover all three metrics.
std::vector<TableEntry> parse_reference_tables(std::istream& in);

}  // namespace horizonbench
