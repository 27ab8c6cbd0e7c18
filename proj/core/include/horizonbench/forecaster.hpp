#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "horizonbench/ingest.hpp"
#include "horizonbench/quantile_forecast.hpp"

namespace horizonbench {

enum class ForecasterKind { seasonal_naive, arima, decomposition, quantized_sampler, external };

std::string_view to_string(ForecasterKind k);
std::optional<ForecasterKind> parse_forecaster_kind(std::string_view text);

/// Which model to run plus its parameters. Parameters are kept as text so the
/// spec serializes verbatim into the run manifest; validate() checks every key
/// and value for the kind.
struct ForecasterSpec {
    ForecasterKind kind;
    std::map<std::string, std::string> parameters;

    /// The kind with its documented defaults filled in.
    static ForecasterSpec defaults(ForecasterKind kind);

    /// Parses "kind" or "kind;key=value;..." (missing keys get defaults).
    static ForecasterSpec parse(std::string_view text);

    /// Throws InvalidArgument on unknown keys or out-of-range values.
    void validate() const;

    /// "kind;key=value;..." with keys sorted.
    [[nodiscard]] std::string serialize() const;

    /// Name used in results: the kind, or "external:<model>".
    [[nodiscard]] std::string label() const;

    [[nodiscard]] long long get_int(std::string_view key) const;
    [[nodiscard]] double get_double(std::string_view key) const;
    [[nodiscard]] const std::string& get(std::string_view key) const;

    friend bool operator==(const ForecasterSpec&, const ForecasterSpec&) = default;
};

struct ForecastResult {
    QuantileForecast forecast;
    /// Free-form fit diagnostics for the manifest (order, coefficients, ...).
    std::string diagnostics;
};

/// Uniform contract: every model consumes the same context and returns the
/// nine decimal quantiles for `horizon_days` days after the context.
class Forecaster {
public:
    virtual ~Forecaster() = default;

    /// Deterministic given (context, horizon_days, seed).
    virtual ForecastResult forecast(const DailySeries& context, int horizon_days, std::uint64_t seed) = 0;
};

class BridgePool;

/// Shared resources some forecasters need.
struct ForecasterEnvironment {
    std::shared_ptr<BridgePool> bridge;
};

std::unique_ptr<Forecaster> make_forecaster(const ForecasterSpec& spec,
                                            const ForecasterEnvironment& env = {});

/// make_forecaster + forecast in one call.
ForecastResult forecast(const ForecasterSpec& spec, const DailySeries& context, int horizon_days,
                        std::uint64_t seed, const ForecasterEnvironment& env = {});

}  // namespace horizonbench
