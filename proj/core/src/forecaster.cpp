#include "horizonbench/forecaster.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <vector>

#include "csv.hpp"
#include "horizonbench/arima.hpp"
#include "horizonbench/bridge.hpp"
#include "horizonbench/decomposition.hpp"
#include "horizonbench/error.hpp"
#include "horizonbench/quantized_sampler.hpp"
#include "horizonbench/seasonal_naive.hpp"

namespace horizonbench {

namespace {

constexpr std::pair<ForecasterKind, std::string_view> kKindNames[] = {
    {ForecasterKind::seasonal_naive, "seasonal_naive"},
    {ForecasterKind::arima, "arima"},
    {ForecasterKind::decomposition, "decomposition"},
    {ForecasterKind::quantized_sampler, "quantized_sampler"},
    {ForecasterKind::external, "external"},
};

std::optional<long long> to_int(std::string_view s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<double> to_double(std::string_view s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

[[noreturn]] void bad_value(const ForecasterSpec& spec, std::string_view key, std::string_view why) {
    throw InvalidArgument("invalid parameter " + std::string(to_string(spec.kind)) + "." + std::string(key) +
                          "=" + spec.get(key) + ": " + std::string(why));
}

void require_int(const ForecasterSpec& spec, std::string_view key, long long lo, long long hi) {
    auto v = to_int(spec.get(key));
    if (!v) bad_value(spec, key, "not an integer");
    if (*v < lo || *v > hi) {
        bad_value(spec, key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
}

void require_double(const ForecasterSpec& spec, std::string_view key, double lo, double hi, bool open_low) {
    auto v = to_double(spec.get(key));
    if (!v) bad_value(spec, key, "not a finite number");
    if ((open_low ? *v <= lo : *v < lo) || *v > hi) bad_value(spec, key, "out of range");
}

}  // namespace

std::string_view to_string(ForecasterKind k) {
    for (auto& [kind, name] : kKindNames) {
        if (kind == k) return name;
    }
    return "unknown";
}

std::optional<ForecasterKind> parse_forecaster_kind(std::string_view text) {
    const std::string lowered = detail::to_lower(detail::trim(text));
    for (auto& [kind, name] : kKindNames) {
        if (lowered == name) return kind;
    }
    return std::nullopt;
}

ForecasterSpec ForecasterSpec::defaults(ForecasterKind kind) {
    ForecasterSpec s{kind, {}};
    switch (kind) {
    case ForecasterKind::seasonal_naive:
        s.parameters = {{"season_length", "7"}};
        break;
    case ForecasterKind::arima:
        s.parameters = {{"p_max", "5"}, {"q_max", "5"}};
        break;
    case ForecasterKind::decomposition:
        s.parameters = {{"n_changepoints", "25"}, {"changepoint_range", "0.8"}, {"reg_strength", "20"},
                        {"num_samples", "500"},   {"weekly_order", "3"},         {"yearly_order", "10"}};
        break;
    case ForecasterKind::quantized_sampler:
        s.parameters = {{"num_bins", "4096"}, {"low", "-15"}, {"high", "15"}, {"num_samples", "20"}, {"order", "7"}};
        break;
    case ForecasterKind::external:
        s.parameters = {{"bridge", ""}, {"model", "chronos-t5-small"}, {"num_samples", "20"}};
        break;
    }
    return s;
}

ForecasterSpec ForecasterSpec::parse(std::string_view text) {
    std::vector<std::string> parts;
    std::size_t begin = 0;
    while (true) {
        auto end = text.find(';', begin);
        parts.emplace_back(detail::trim(text.substr(begin, end == std::string_view::npos ? end : end - begin)));
        if (end == std::string_view::npos) break;
        begin = end + 1;
    }
    auto kind = parse_forecaster_kind(parts.front());
    if (!kind) throw InvalidArgument("unknown model '" + parts.front() + "'");
    ForecasterSpec spec = defaults(*kind);
    std::set<std::string> seen;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i].empty()) continue;
        auto eq = parts[i].find('=');
        if (eq == std::string::npos) throw InvalidArgument("malformed model parameter '" + parts[i] + "'");
        std::string key(detail::trim(std::string_view(parts[i]).substr(0, eq)));
        std::string value(detail::trim(std::string_view(parts[i]).substr(eq + 1)));
        if (!spec.parameters.contains(key)) {
            throw InvalidArgument("unknown parameter '" + key + "' for " + std::string(to_string(*kind)));
        }
        if (!seen.insert(key).second) throw InvalidArgument("duplicate parameter '" + key + "'");
        spec.parameters[key] = value;
    }
    spec.validate();
    return spec;
}

void ForecasterSpec::validate() const {
    const auto reference = defaults(kind);
    for (auto& [key, value] : parameters) {
        if (!reference.parameters.contains(key)) {
            throw InvalidArgument("unknown parameter '" + key + "' for " + std::string(to_string(kind)));
        }
    }
    for (auto& [key, value] : reference.parameters) {
        if (!parameters.contains(key)) throw InvalidArgument("missing parameter '" + key + "'");
    }
    switch (kind) {
    case ForecasterKind::seasonal_naive:
        require_int(*this, "season_length", 1, 366);
        break;
    case ForecasterKind::arima:
        require_int(*this, "p_max", 0, 5);
        require_int(*this, "q_max", 0, 5);
        break;
    case ForecasterKind::decomposition:
        require_int(*this, "n_changepoints", 0, 1000);
        require_double(*this, "changepoint_range", 0.0, 1.0, true);
        require_double(*this, "reg_strength", 0.0, 1e12, false);
        require_int(*this, "num_samples", 1, 100000);
        require_int(*this, "weekly_order", 0, 3);
        require_int(*this, "yearly_order", 0, 100);
        break;
    case ForecasterKind::quantized_sampler: {
        require_int(*this, "num_bins", 2, 1 << 20);
        require_double(*this, "low", -1e6, 1e6, false);
        require_double(*this, "high", -1e6, 1e6, false);
        if (get_double("low") >= get_double("high")) bad_value(*this, "high", "must exceed low");
        require_int(*this, "num_samples", 1, 100000);
        require_int(*this, "order", 0, 64);
        break;
    }
    case ForecasterKind::external:
        require_int(*this, "num_samples", 1, 100000);
        if (get("model").empty()) bad_value(*this, "model", "empty model name");
        break;
    }
}

std::string ForecasterSpec::serialize() const {
    std::string out(to_string(kind));
    for (auto& [key, value] : parameters) out += ";" + key + "=" + value;
    return out;
}

std::string ForecasterSpec::label() const {
    if (kind == ForecasterKind::external) return "external:" + get("model");
    return std::string(to_string(kind));
}

long long ForecasterSpec::get_int(std::string_view key) const {
    auto v = to_int(get(key));
    if (!v) bad_value(*this, key, "not an integer");
    return *v;
}

double ForecasterSpec::get_double(std::string_view key) const {
    auto v = to_double(get(key));
    if (!v) bad_value(*this, key, "not a finite number");
    return *v;
}

const std::string& ForecasterSpec::get(std::string_view key) const {
    auto it = parameters.find(std::string(key));
    if (it == parameters.end()) throw InvalidArgument("missing parameter '" + std::string(key) + "'");
    return it->second;
}

std::unique_ptr<Forecaster> make_forecaster(const ForecasterSpec& spec, const ForecasterEnvironment& env) {
    spec.validate();
    switch (spec.kind) {
    case ForecasterKind::seasonal_naive:
        return std::make_unique<SeasonalNaiveForecaster>(static_cast<int>(spec.get_int("season_length")));
    case ForecasterKind::arima:
        return std::make_unique<arima::ArimaForecaster>(
            arima::AutoOptions{static_cast<int>(spec.get_int("p_max")), static_cast<int>(spec.get_int("q_max"))});
    case ForecasterKind::decomposition: {
        DecompositionConfig cfg;
        cfg.n_changepoints = static_cast<int>(spec.get_int("n_changepoints"));
        cfg.changepoint_range = spec.get_double("changepoint_range");
        cfg.reg_strength = spec.get_double("reg_strength");
        cfg.weekly_order = static_cast<int>(spec.get_int("weekly_order"));
        cfg.yearly_order = static_cast<int>(spec.get_int("yearly_order"));
        return std::make_unique<DecompositionForecaster>(cfg, static_cast<int>(spec.get_int("num_samples")));
    }
    case ForecasterKind::quantized_sampler: {
        TokenizerConfig cfg{static_cast<int>(spec.get_int("num_bins")), spec.get_double("low"),
                            spec.get_double("high")};
        return std::make_unique<QuantizedSamplerForecaster>(cfg, static_cast<int>(spec.get_int("num_samples")),
                                                            static_cast<int>(spec.get_int("order")));
    }
    case ForecasterKind::external: {
        auto pool = env.bridge;
        if (!pool) {
            if (spec.get("bridge").empty()) {
                throw InvalidArgument("external model '" + spec.get("model") + "' needs a bridge address");
            }
            pool = std::make_shared<BridgePool>(spec.get("bridge"), 1);
        }
        return std::make_unique<ExternalForecaster>(std::move(pool), spec.get("model"),
                                                    static_cast<int>(spec.get_int("num_samples")));
    }
    }
    throw InvalidArgument("unknown model kind");
}

ForecastResult forecast(const ForecasterSpec& spec, const DailySeries& context, int horizon_days,
                        std::uint64_t seed, const ForecasterEnvironment& env) {
    if (horizon_days <= 0) throw InvalidArgument("insufficient horizon");
    return make_forecaster(spec, env)->forecast(context, horizon_days, seed);
}

}  // namespace horizonbench
