#include "horizonbench/report.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "csv.hpp"
#include "horizonbench/error.hpp"

namespace horizonbench {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    std::string s(buf);
    // "-0.0000" prints as "0.0000".
    if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
    return s;
}

std::string csv_quote(std::string_view text) {
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += (c == '\n' || c == '\r') ? ' ' : c;
    }
    return out + "\"";
}


double parse_number(std::string_view field, std::size_t line) {
    std::string s(field);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
        throw InvalidArgument("invalid number '" + s + "' at line " + std::to_string(line));
    }
    return v;
}

template <typename T>
T require(std::optional<T> v, std::string_view field, std::size_t line) {
    if (!v) throw InvalidArgument("invalid field '" + std::string(field) + "' at line " + std::to_string(line));
    return *v;
}

}  // namespace

std::string_view to_string(Metric m) {
    switch (m) {
        case Metric::emd: return "emd";
        case Metric::mase: return "mase";
        case Metric::wql: return "wql";
    }
    return "unknown";
}

std::optional<Metric> parse_metric(std::string_view text) {
    const auto lower = detail::to_lower(detail::trim(text));
    for (Metric m : kAllMetrics) {
        if (lower == to_string(m)) return m;
    }
    return std::nullopt;
}

double value_of(const MetricTriple& triple, Metric m) {
    switch (m) {
        case Metric::emd: return triple.emd;
        case Metric::mase: return triple.mase;
        case Metric::wql: return triple.wql;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::vector<TableEntry> entries_from_cells(std::span<const ResultCell> cells) {
    std::vector<TableEntry> out;
    for (const auto& c : cells) {
        if (c.ok()) out.push_back({c.model, c.scenario.target.name, c.scenario.user_class, c.scenario.ratio, *c.metrics});
    }
    return out;
}

std::string TableColumn::label() const {
    return std::string(to_string(target)) + "_" + std::string(to_string(user_class));
}

std::vector<TableColumn> default_columns() {
    std::vector<TableColumn> out;
    for (Target t : kAllTargets) {
        for (UserClass c : kAllUserClasses) out.push_back({t, c});
    }
    return out;
}

bool MetricTable::is_min(std::size_t model, Metric m, std::size_t column) const {
    const std::string mine = format_metric(value(model, m, column));
    for (std::size_t other = 0; other < models.size(); ++other) {
        if (value(other, m, column) < value(model, m, column) && format_metric(value(other, m, column)) != mine) {
            return false;
        }
    }
    return true;
}

MetricTable metric_table(std::span<const TableEntry> entries, ContextRatio ratio,
                         std::span<const TableColumn> columns) {
    MetricTable table{ratio, {columns.begin(), columns.end()}, {}, {}};
    for (const auto& e : entries) {
        if (e.ratio == ratio && std::find(table.models.begin(), table.models.end(), e.model) == table.models.end()) {
            table.models.push_back(e.model);
        }
    }
    if (table.models.empty()) throw Error("incomplete run: no results for ratio " + ratio.label());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    table.values.assign(table.models.size(), {});
    for (auto& per_metric : table.values) {
        for (auto& row : per_metric) row.assign(columns.size(), nan);
    }
    for (const auto& e : entries) {
        if (e.ratio != ratio) continue;
        auto col = std::find(columns.begin(), columns.end(), TableColumn{e.target, e.user_class});
        if (col == columns.end()) continue;
        const auto mi = static_cast<std::size_t>(
            std::find(table.models.begin(), table.models.end(), e.model) - table.models.begin());
        const auto ci = static_cast<std::size_t>(col - columns.begin());
        for (Metric m : kAllMetrics) table.values[mi][static_cast<std::size_t>(m)][ci] = value_of(e.metrics, m);
    }
    for (std::size_t mi = 0; mi < table.models.size(); ++mi) {
        for (std::size_t ci = 0; ci < columns.size(); ++ci) {
            if (std::isnan(table.values[mi][0][ci])) {
                throw Error("incomplete run: " + table.models[mi] + " has no result for " + columns[ci].label() +
                            " at ratio " + ratio.label());
            }
        }
    }
    return table;
}

std::string format_metric(double v) { return fixed(v, 4); }

double round_half_even(double v, int decimals) {
    const double scale = std::pow(10.0, decimals);
    const int saved = std::fegetround();
    std::fesetround(FE_TONEAREST);
    const double r = std::nearbyint(v * scale) / scale;
    std::fesetround(saved);
    return r;
}

std::string format_percent(double v) {
    const double r = round_half_even(v, 1);
    std::string s = fixed(r, 1);
    if (s != "0.0" && s.front() != '-') s.insert(0, "+");
    return s;
}

double percent_change(double value, double baseline) {
    if (baseline == 0.0) throw Error("undefined percent change: baseline is zero");
    return (value - baseline) / baseline * 100.0;
}

std::map<ContextRatio, double> degradation(const std::map<ContextRatio, double>& by_ratio, ContextRatio baseline) {
    auto base = by_ratio.find(baseline);
    if (base == by_ratio.end()) throw Error("undefined percent change: baseline ratio " + baseline.label() + " missing");
    std::map<ContextRatio, double> out;
    for (auto& [ratio, value] : by_ratio) out.emplace(ratio, ratio == baseline ? 0.0 : percent_change(value, base->second));
    return out;
}

std::string to_csv(const MetricTable& table) {
    std::ostringstream out;
    out << "model,metric";
    for (const auto& c : table.columns) out << ',' << c.label();
    out << '\n';
    for (std::size_t mi = 0; mi < table.models.size(); ++mi) {
        for (Metric m : kAllMetrics) {
            out << table.models[mi] << ',' << to_string(m);
            for (std::size_t ci = 0; ci < table.columns.size(); ++ci) {
                out << ',' << format_metric(table.value(mi, m, ci)) << (table.is_min(mi, m, ci) ? "*" : "");
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string to_json(const MetricTable& table) {
    nlohmann::ordered_json doc;
    doc["ratio"] = table.ratio.label();
    auto& cols = doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : table.columns) cols.push_back(c.label());
    auto& rows = doc["rows"] = nlohmann::ordered_json::array();
    for (std::size_t mi = 0; mi < table.models.size(); ++mi) {
        for (Metric m : kAllMetrics) {
            nlohmann::ordered_json row;
            row["model"] = table.models[mi];
            row["metric"] = to_string(m);
            auto& values = row["values"] = nlohmann::ordered_json::array();
            auto& mins = row["min"] = nlohmann::ordered_json::array();
            for (std::size_t ci = 0; ci < table.columns.size(); ++ci) {
                values.push_back(std::stod(format_metric(table.value(mi, m, ci))));
                mins.push_back(table.is_min(mi, m, ci));
            }
            rows.push_back(std::move(row));
        }
    }
    return doc.dump(2) + "\n";
}

DegradationTable degradation_table(std::span<const TableEntry> entries, Metric metric, ContextRatio baseline) {
    DegradationTable table{metric, baseline, {}};
    for (const auto& e : entries) {
        if (e.ratio == baseline || e.ratio.is_calendar()) continue;
        auto base = std::find_if(entries.begin(), entries.end(), [&](const TableEntry& b) {
            return b.model == e.model && b.target == e.target && b.user_class == e.user_class && b.ratio == baseline;
        });
        if (base == entries.end()) continue;
        const double x0 = value_of(base->metrics, metric);
        const double x = value_of(e.metrics, metric);
        table.rows.push_back({e.model, e.target, e.user_class, e.ratio, x0, x, percent_change(x, x0)});
    }
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const DegradationRow& a, const DegradationRow& b) {
        return std::tie(a.target, a.model, a.user_class, a.ratio) < std::tie(b.target, b.model, b.user_class, b.ratio);
    });
    return table;
}

std::string_view to_string(ColumnLabeling l) { return l == ColumnLabeling::swapped ? "swapped" : "as_labeled"; }

DegradationTable relabel(DegradationTable table, ColumnLabeling labeling) {
    if (labeling == ColumnLabeling::as_labeled) return table;
    for (auto& row : table.rows) {
        if (row.target == Target::july) {
            row.target = Target::q4;
        } else if (row.target == Target::q4) {
            row.target = Target::july;
        }
    }
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const DegradationRow& a, const DegradationRow& b) {
        return std::tie(a.target, a.model, a.user_class, a.ratio) < std::tie(b.target, b.model, b.user_class, b.ratio);
    });
    return table;
}

std::string to_csv(const DegradationTable& table) {
    std::ostringstream out;
    out << "target,model,user_class,ratio,percent_change\n";
    for (const auto& r : table.rows) {
        out << to_string(r.target) << ',' << r.model << ',' << to_string(r.user_class) << ',' << r.ratio.label() << ','
            << format_percent(r.percent) << '\n';
    }
    return out.str();
}

std::vector<DegradationRow> parse_degradation_csv(std::istream& in) {
    std::vector<DegradationRow> rows;
    std::string line;
    std::size_t line_no = 0;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || detail::trim(line).empty()) continue;
        auto f = detail::split_fields(line);
        if (f.size() != 5) throw InvalidArgument("expected 5 fields at line " + std::to_string(line_no));
        rows.push_back({std::string(f[1]), require(parse_target(f[0]), f[0], line_no),
                        require(parse_user_class(f[2]), f[2], line_no), ContextRatio::parse(f[3]), nan, nan,
                        parse_number(f[4], line_no)});
    }
    return rows;
}

std::vector<SwarmRecord> swarm_data(std::span<const TableEntry> entries, Metric metric) {
    std::vector<SwarmRecord> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back({e.model, e.target, e.user_class, e.ratio, value_of(e.metrics, metric)});
    std::stable_sort(out.begin(), out.end(), [](const SwarmRecord& a, const SwarmRecord& b) {
        return std::tie(a.target, a.user_class, a.model, a.ratio) < std::tie(b.target, b.user_class, b.model, b.ratio);
    });
    return out;
}

std::string to_csv(std::span<const SwarmRecord> records) {
    std::ostringstream out;
    out << "model,target,user_class,ratio,score\n";
    for (const auto& r : records) {
        out << r.model << ',' << to_string(r.target) << ',' << to_string(r.user_class) << ',' << r.ratio.label()
            << ',' << format_metric(r.score) << '\n';
    }
    return out.str();
}

std::string results_csv(std::span<const ResultCell> cells) {
    std::ostringstream out;
    out << "model,target,user_class,ratio,emd,mase,wql,seed\n";
    for (const auto& c : cells) {
        out << c.model << ',' << to_string(c.scenario.target.name) << ',' << to_string(c.scenario.user_class) << ','
            << c.scenario.ratio.label() << ',';
        if (c.ok()) {
            out << format_metric(c.metrics->emd) << ',' << format_metric(c.metrics->mase) << ','
                << format_metric(c.metrics->wql);
        } else {
            out << "NA,NA,NA";
        }
        out << ',' << c.seed << '\n';
    }
    return out.str();
}

std::string errors_csv(std::span<const ResultCell> cells) {
    std::ostringstream out;
    out << "model,target,user_class,ratio,seed,error\n";
    for (const auto& c : cells) {
        if (c.ok()) continue;
        out << c.model << ',' << to_string(c.scenario.target.name) << ',' << to_string(c.scenario.user_class) << ','
            << c.scenario.ratio.label() << ',' << c.seed << ',' << csv_quote(c.error) << '\n';
    }
    return out.str();
}

std::vector<TableEntry> parse_reference_tables(std::istream& in) {
    struct Partial {
        std::optional<double> values[3];
    };
    std::map<std::tuple<std::string, ContextRatio, Target, UserClass>, Partial> grouped;
    std::vector<std::tuple<std::string, ContextRatio, Target, UserClass>> order;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 || detail::trim(line).empty()) continue;
        auto f = detail::split_fields(line);
        if (f.size() != 6) throw InvalidArgument("expected 6 fields at line " + std::to_string(line_no));
        auto key = std::make_tuple(std::string(f[0]), ContextRatio::parse(f[1]), require(parse_target(f[2]), f[2], line_no),
                                   require(parse_user_class(f[3]), f[3], line_no));
        const Metric m = require(parse_metric(f[4]), f[4], line_no);
        auto [it, inserted] = grouped.try_emplace(key);
        if (inserted) order.push_back(key);
        auto& slot = it->second.values[static_cast<std::size_t>(m)];
        if (slot) throw InvalidArgument("duplicate reference value at line " + std::to_string(line_no));
        slot = parse_number(f[5], line_no);
    }
    std::vector<TableEntry> out;
    for (const auto& key : order) {
        const auto& p = grouped.at(key);
        if (!p.values[0] || !p.values[1] || !p.values[2]) {
            throw InvalidArgument("reference table is missing a metric for " + std::get<0>(key));
        }
        out.push_back({std::get<0>(key), std::get<2>(key), std::get<3>(key), std::get<1>(key),
                       {*p.values[0], *p.values[1], *p.values[2]}});
    }
    return out;
}

}  // namespace horizonbench
