#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "horizonbench/calendar.hpp"
#include "horizonbench/ingest.hpp"

namespace horizonbench {

enum class Target { week10, july, q4 };

inline constexpr Target kAllTargets[] = {Target::week10, Target::july, Target::q4};

std::string_view to_string(Target t);
std::optional<Target> parse_target(std::string_view text);

/// 7, 31 or 91.
int horizon_days_for(Target t);

struct TargetWindow {
    Target name;
    Date start;
    int horizon_days;

    [[nodiscard]] Date end() const { return add_days(start, horizon_days - 1); }

    friend bool operator==(const TargetWindow&, const TargetWindow&) = default;
};

/// Window with the canonical horizon for `name` starting at `start`.
TargetWindow make_target(Target name, const Date& start);

/// Default anchors: ISO week 10 of 2012 (2012-03-05), 2012-07-01, and
/// 2012-10-01 for the 91-day Q4 window (ends 2012-12-30).
TargetWindow default_target(Target name);

/// Context length as an integer multiple of the horizon, or the calendar split
/// (three preceding calendar weeks / months / quarters).
class ContextRatio {
public:
    /// Accepts 2..5 only.
    static ContextRatio multiple(int k);
    static ContextRatio calendar() { return ContextRatio(0); }

    /// "2", "2:1", or "calendar".
    static ContextRatio parse(std::string_view text);

    [[nodiscard]] bool is_calendar() const noexcept { return k_ == 0; }
    [[nodiscard]] int value() const noexcept { return k_; }

    /// "2:1" or "calendar".
    [[nodiscard]] std::string label() const;

    /// Integers ascending, calendar last.
    friend std::strong_ordering operator<=>(const ContextRatio& a, const ContextRatio& b) {
        auto key = [](const ContextRatio& r) { return r.k_ == 0 ? 1000 : r.k_; };
        return key(a) <=> key(b);
    }
    friend bool operator==(const ContextRatio&, const ContextRatio&) = default;

private:
    explicit ContextRatio(int k) : k_(k) {}
    int k_;
};

/// One evaluation cell. Context is [context_start, target.start).
struct Scenario {
    TargetWindow target;
    UserClass user_class;
    ContextRatio ratio;
    Date context_start;
    int context_days;

    [[nodiscard]] Date context_end() const { return add_days(target.start, -1); }

    /// "week10/casual/2:1".
    [[nodiscard]] std::string id() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct DateRange {
    Date first;
    Date last;
};

/// Resolves the context window for one cell. No range checks.
Scenario make_scenario(const TargetWindow& target, UserClass user_class, ContextRatio ratio);

/// Every (target, class, ratio) combination in that nesting order, duplicates
/// removed. Throws Error "insufficient history for scenario" when a context
/// window starts before `span.first`, and Error "target outside dataset" when
/// a target window leaves the span.
std::vector<Scenario> build_matrix(const DateRange& span, std::span<const TargetWindow> targets,
                                   std::span<const ContextRatio> ratios,
                                   std::span<const UserClass> classes);

struct ScenarioSlice {
    DailySeries context;
    DailySeries actuals;
};

/// Cuts the context and actuals windows out of `series`.
ScenarioSlice slice(const DailySeries& series, const Scenario& scenario);

/// Human-readable lines with every scenario's resolved dates.
std::string manifest_fragment(std::span<const Scenario> scenarios);

}  // namespace horizonbench
