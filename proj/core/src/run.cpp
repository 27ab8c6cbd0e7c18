#include "horizonbench/run.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "csv.hpp"
#include "horizonbench/bridge.hpp"
#include "horizonbench/error.hpp"

namespace horizonbench {

namespace {

std::vector<std::string_view> split_list(std::string_view text) {
    std::vector<std::string_view> out;
    std::size_t begin = 0;
    while (true) {
        auto end = text.find(',', begin);
        auto item = detail::trim(text.substr(begin, end == std::string_view::npos ? end : end - begin));
        if (!item.empty()) out.push_back(item);
        if (end == std::string_view::npos) break;
        begin = end + 1;
    }
    if (out.empty()) throw InvalidArgument("empty list '" + std::string(text) + "'");
    return out;
}

template <typename T>
void require_unique(const std::vector<T>& items, const char* what) {
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) {
            if (items[i] == items[j]) throw InvalidArgument(std::string("duplicate entry in ") + what);
        }
    }
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& fmt) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += ',';
        out += fmt(item);
    }
    return out;
}

std::string one_line(std::string text) {
    std::replace(text.begin(), text.end(), '\n', ' ');
    std::replace(text.begin(), text.end(), '\r', ' ');
    return text;
}

std::string file_tag(ContextRatio r) { return r.is_calendar() ? "calendar" : std::to_string(r.value()); }

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("cannot write " + path.string());
}

}  // namespace

std::string_view version() {
#ifdef HORIZONBENCH_VERSION
    return HORIZONBENCH_VERSION;
#else
    return "unknown";
#endif
}

std::vector<ForecasterSpec> RunConfig::default_models() {
    return {ForecasterSpec::defaults(ForecasterKind::arima), ForecasterSpec::defaults(ForecasterKind::quantized_sampler),
            ForecasterSpec::defaults(ForecasterKind::seasonal_naive),
            ForecasterSpec::defaults(ForecasterKind::decomposition)};
}

void RunConfig::validate() const {
    if (data.empty()) throw InvalidArgument("no data file given");
    if (!std::filesystem::is_regular_file(data)) throw InvalidArgument("data file not found: " + data.string());
    if (targets.empty() || ratios.empty() || classes.empty() || models.empty()) {
        throw InvalidArgument("targets, ratios, classes and models must be non-empty");
    }
    require_unique(targets, "targets");
    require_unique(ratios, "ratios");
    require_unique(classes, "classes");
    std::set<std::string> labels;
    for (const auto& m : models) {
        m.validate();
        if (!labels.insert(m.label()).second) throw InvalidArgument("duplicate model '" + m.label() + "'");
        if (m.kind == ForecasterKind::external && m.get("bridge").empty() && bridge.empty()) {
            throw InvalidArgument("external model '" + m.get("model") + "' needs --bridge");
        }
    }
    if (jobs < 0) throw InvalidArgument("invalid jobs " + std::to_string(jobs));
}

std::vector<TargetWindow> RunConfig::target_windows() const {
    std::vector<TargetWindow> out;
    for (Target t : targets) {
        std::optional<Date> start;
        switch (t) {
            case Target::week10: start = week10_start; break;
            case Target::july: start = july_start; break;
            case Target::q4: start = q4_start; break;
        }
        out.push_back(start ? make_target(t, *start) : default_target(t));
    }
    return out;
}

int RunConfig::effective_jobs() const {
    if (jobs > 0) return jobs;
    return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

std::uint64_t cell_seed(std::uint64_t global_seed, const std::string& model_label, const Scenario& scenario) {
    const std::string key = std::to_string(global_seed) + "|" + model_label + "|" +
                            std::string(to_string(scenario.target.name)) + "|" +
                            std::string(to_string(scenario.user_class)) + "|" + scenario.ratio.label();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : key) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

PreparedRun prepare(const RunConfig& config) {
    config.validate();
    PreparedRun prep;
    for (UserClass c : config.classes) prep.series.push_back(load_series(config.data, c));
    const auto& first = prep.series.front();
    DateRange span{first.start_date(), first.end_date()};
    for (const auto& s : prep.series) {
        span.first = std::max(span.first, s.start_date());
        span.last = std::min(span.last, s.end_date());
    }
    const auto windows = config.target_windows();
    prep.scenarios = build_matrix(span, windows, config.ratios, config.classes);
    return prep;
}

ResultCell evaluate_cell(const ForecasterSpec& spec, const Scenario& scenario, const DailySeries& series,
                         std::uint64_t seed, const ForecasterEnvironment& env, MetricConvention metrics) {
    ResultCell cell{spec.label(), scenario, std::nullopt, seed, {}, {}};
    try {
        auto parts = slice(series, scenario);
        auto result = make_forecaster(spec, env)->forecast(parts.context, scenario.target.horizon_days, seed);
        cell.diagnostics = one_line(result.diagnostics);
        cell.metrics = score(parts.actuals.values(), result.forecast, parts.context.values(), metrics);
    } catch (const std::exception& e) {
        cell.metrics.reset();
        cell.error = one_line(e.what());
        if (cell.error.empty()) cell.error = "unknown failure";
    }
    return cell;
}

bool RunResult::all_ok() const {
    return std::all_of(cells.begin(), cells.end(), [](const ResultCell& c) { return c.ok(); });
}

RunResult run(const RunConfig& config) {
    const PreparedRun prep = prepare(config);
    const int jobs = config.effective_jobs();

    ForecasterEnvironment env;
    const bool needs_bridge = std::any_of(config.models.begin(), config.models.end(), [](const ForecasterSpec& m) {
        return m.kind == ForecasterKind::external;
    });
    if (needs_bridge && !config.bridge.empty()) env.bridge = std::make_shared<BridgePool>(config.bridge, jobs);

    struct Task {
        const ForecasterSpec* spec;
        const Scenario* scenario;
        const DailySeries* series;
    };
    std::vector<Task> tasks;
    for (const auto& spec : config.models) {
        for (const auto& sc : prep.scenarios) {
            const auto idx = static_cast<std::size_t>(
                std::find(config.classes.begin(), config.classes.end(), sc.user_class) - config.classes.begin());
            tasks.push_back({&spec, &sc, &prep.series[idx]});
        }
    }

    std::vector<std::optional<ResultCell>> slots(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const auto& t = tasks[i];
            // Models naming their own bridge get a private pool from the factory.
            ForecasterEnvironment cell_env = env;
            if (t.spec->kind == ForecasterKind::external && !t.spec->get("bridge").empty()) cell_env.bridge.reset();
            slots[i] = evaluate_cell(*t.spec, *t.scenario, *t.series,
                                            cell_seed(config.seed, t.spec->label(), *t.scenario), cell_env,
                                     config.metrics);
        }
    };
    const int threads = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(tasks.size(), 1)));
    std::vector<std::jthread> pool;
    for (int k = 1; k < threads; ++k) pool.emplace_back(worker);
    worker();
    pool.clear();

    RunResult result;
    for (auto& slot : slots) result.cells.push_back(std::move(*slot));
    result.files = write_report(config, prep.scenarios, result.cells);
    return result;
}

std::vector<std::filesystem::path> write_report(const RunConfig& config, std::span<const Scenario> scenarios,
                                                std::span<const ResultCell> cells) {
    if (config.out.empty()) throw InvalidArgument("no output directory given");
    std::filesystem::create_directories(config.out);
    std::vector<std::filesystem::path> files;
    auto emit = [&](const std::string& name, const std::string& content) {
        files.push_back(config.out / name);
        write_file(files.back(), content);
    };

    emit("results.csv", results_csv(cells));
    emit("errors.csv", errors_csv(cells));

    const auto entries = entries_from_cells(cells);
    const auto columns = default_columns();
    std::vector<TableColumn> present;
    for (const auto& c : columns) {
        const bool has_target = std::find(config.targets.begin(), config.targets.end(), c.target) != config.targets.end();
        const bool has_class =
            std::find(config.classes.begin(), config.classes.end(), c.user_class) != config.classes.end();
        if (has_target && has_class) present.push_back(c);
    }
    std::vector<std::string> incomplete;
    for (ContextRatio r : config.ratios) {
        try {
            auto table = metric_table(entries, r, present);
            emit("table_" + file_tag(r) + ".csv", to_csv(table));
            emit("table_" + file_tag(r) + ".json", to_json(table));
        } catch (const Error& e) {
            incomplete.push_back(file_tag(r) + ": " + e.what());
        }
    }
    for (Metric m : kAllMetrics) {
        emit("degradation_" + std::string(to_string(m)) + ".csv", to_csv(degradation_table(entries, m)));
        emit("swarm_" + std::string(to_string(m)) + ".csv", to_csv(swarm_data(entries, m)));
    }

    std::string text = manifest(config, scenarios, cells);
    for (const auto& line : incomplete) text += "table_skipped=" + one_line(line) + "\n";
    emit("manifest.txt", text);
    return files;
}

std::string manifest(const RunConfig& config, std::span<const Scenario> scenarios,
                     std::span<const ResultCell> cells) {
    std::ostringstream out;
    out << "# horizonbench run manifest\n";
    out << "version=" << version() << "\n";
    out << "data=" << config.data.string() << "\n";
    out << "targets=" << join(config.targets, [](Target t) { return std::string(to_string(t)); }) << "\n";
    out << "ratios=" << join(config.ratios, [](ContextRatio r) { return file_tag(r); }) << "\n";
    out << "classes=" << join(config.classes, [](UserClass c) { return std::string(to_string(c)); }) << "\n";
    for (const auto& m : config.models) out << "model=" << m.serialize() << "\n";
    out << "metrics=" << to_string(config.metrics) << "\n";
    out << "seed=" << config.seed << "\n";
    out << "jobs=" << config.jobs << "\n";
    out << "out=" << config.out.string() << "\n";
    out << "bridge=" << config.bridge << "\n";
    auto anchor = [&](const char* key, const std::optional<Date>& d, Target t) {
        out << key << "=" << (d ? format_date(*d) : "") << "\n";
        out << "# " << key << " resolved " << format_date(d ? *d : default_target(t).start)
            << (d ? " (override)" : " (default anchor, not taken from the source tables)") << "\n";
    };
    anchor("week10_start", config.week10_start, Target::week10);
    anchor("july_start", config.july_start, Target::july);
    anchor("q4_start", config.q4_start, Target::q4);
    out << "# point forecast for MASE: median quantile row\n";
    out << "# empirical quantiles: linear interpolation at (n-1)*tau\n";
    std::istringstream fragment(manifest_fragment(scenarios));
    for (std::string line; std::getline(fragment, line);) {
        if (!line.empty()) out << "scenario=" << line << "\n";
    }
    for (const auto& c : cells) {
        out << "cell=" << c.model << " " << c.scenario.id() << " seed=" << c.seed << " "
            << (c.ok() ? "ok " + c.diagnostics : "error " + c.error) << "\n";
    }
    return out.str();
}

RunConfig parse_manifest(std::istream& in) {
    RunConfig cfg;
    bool saw_model = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidArgument("malformed manifest line " + std::to_string(line_no));
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        auto date_or_none = [&](std::optional<Date>& slot) {
            slot = value.empty() ? std::nullopt : std::optional<Date>(require_date(value, key));
        };
        if (key == "data") {
            cfg.data = value;
        } else if (key == "targets") {
            cfg.targets = parse_target_list(value);
        } else if (key == "ratios") {
            cfg.ratios = parse_ratio_list(value);
        } else if (key == "classes") {
            cfg.classes = parse_class_list(value);
        } else if (key == "model") {
            if (!saw_model) cfg.models.clear();
            saw_model = true;
            cfg.models.push_back(ForecasterSpec::parse(value));
        } else if (key == "metrics") {
            auto c = parse_metric_convention(value);
            if (!c) throw InvalidArgument("invalid metrics convention '" + value + "' in manifest");
            cfg.metrics = *c;
        } else if (key == "seed") {
            try {
                std::size_t used = 0;
                cfg.seed = std::stoull(value, &used);
                if (used != value.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw InvalidArgument("invalid seed '" + value + "' in manifest");
            }
        } else if (key == "jobs") {
            try {
                cfg.jobs = std::stoi(value);
            } catch (const std::exception&) {
                throw InvalidArgument("invalid jobs '" + value + "' in manifest");
            }
        } else if (key == "out") {
            cfg.out = value;
        } else if (key == "bridge") {
            cfg.bridge = value;
        } else if (key == "week10_start") {
            date_or_none(cfg.week10_start);
        } else if (key == "july_start") {
            date_or_none(cfg.july_start);
        } else if (key == "q4_start") {
            date_or_none(cfg.q4_start);
        }
    }
    return cfg;
}

RunConfig load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read manifest " + path.string());
    return parse_manifest(in);
}

std::vector<Target> parse_target_list(std::string_view text) {
    std::vector<Target> out;
    for (auto item : split_list(text)) {
        auto t = parse_target(item);
        if (!t) throw InvalidArgument("unknown target '" + std::string(item) + "'");
        out.push_back(*t);
    }
    return out;
}

std::vector<ContextRatio> parse_ratio_list(std::string_view text) {
    std::vector<ContextRatio> out;
    for (auto item : split_list(text)) out.push_back(ContextRatio::parse(item));
    return out;
}

std::vector<UserClass> parse_class_list(std::string_view text) {
    std::vector<UserClass> out;
    for (auto item : split_list(text)) {
        auto c = parse_user_class(item);
        if (!c) throw InvalidArgument("unknown user class '" + std::string(item) + "'");
        out.push_back(*c);
    }
    return out;
}

std::vector<ForecasterSpec> parse_model_list(std::string_view text) {
    std::vector<ForecasterSpec> out;
    for (auto item : split_list(text)) out.push_back(ForecasterSpec::parse(item));
    return out;
}

}  // namespace horizonbench
