#include "horizonbench/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "csv.hpp"
#include "horizonbench/error.hpp"

namespace horizonbench {

std::string_view to_string(Target t) {
    switch (t) {
        case Target::week10: return "week10";
        case Target::july: return "july";
        case Target::q4: return "q4";
    }
    return "?";
}

std::optional<Target> parse_target(std::string_view text) {
    std::string lower = detail::to_lower(detail::trim(text));
    for (Target t : kAllTargets) {
        if (lower == to_string(t)) return t;
    }
    return std::nullopt;
}

int horizon_days_for(Target t) {
    switch (t) {
        case Target::week10: return 7;
        case Target::july: return 31;
        case Target::q4: return 91;
    }
    return 0;
}

TargetWindow make_target(Target name, const Date& start) {
    return {name, start, horizon_days_for(name)};
}

TargetWindow default_target(Target name) {
    using namespace std::chrono;
    switch (name) {
        case Target::week10: return make_target(name, iso_week_start(2012, 10));
        case Target::july: return make_target(name, Date{year{2012}, July, day{1}});
        case Target::q4: return make_target(name, Date{year{2012}, October, day{1}});
    }
    throw InvalidArgument("unknown target");
}

ContextRatio ContextRatio::multiple(int k) {
    if (k < 2 || k > 5) {
        throw InvalidArgument("invalid context ratio " + std::to_string(k) + " (expected 2..5)");
    }
    return ContextRatio(k);
}

ContextRatio ContextRatio::parse(std::string_view text) {
    std::string lower = detail::to_lower(detail::trim(text));
    if (lower == "calendar") return calendar();
    std::string_view digits = lower;
    if (digits.ends_with(":1")) digits.remove_suffix(2);
    int k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) {
        throw InvalidArgument("invalid context ratio '" + std::string(text) + "'");
    }
    return multiple(k);
}

std::string ContextRatio::label() const {
    return is_calendar() ? std::string("calendar") : std::to_string(k_) + ":1";
}

std::string Scenario::id() const {
    return std::string(to_string(target.name)) + "/" + std::string(to_string(user_class)) + "/" +
           ratio.label();
}

Scenario make_scenario(const TargetWindow& target, UserClass user_class, ContextRatio ratio) {
    Date context_start;
    if (ratio.is_calendar()) {
        switch (target.name) {
            case Target::week10: context_start = add_days(target.start, -21); break;
            case Target::july: context_start = add_months(target.start, -3); break;
            case Target::q4: context_start = add_months(target.start, -9); break;
        }
    } else {
        context_start = add_days(target.start, -static_cast<long long>(ratio.value()) * target.horizon_days);
    }
    int context_days = static_cast<int>(days_between(context_start, target.start));
    return {target, user_class, ratio, context_start, context_days};
}

std::vector<Scenario> build_matrix(const DateRange& span, std::span<const TargetWindow> targets,
                                   std::span<const ContextRatio> ratios,
                                   std::span<const UserClass> classes) {
    std::vector<Scenario> out;
    for (const auto& target : targets) {
        if (target.horizon_days != horizon_days_for(target.name)) {
            throw InvalidArgument("horizon does not match target " + std::string(to_string(target.name)));
        }
        if (days_between(span.first, target.start) < 0 || days_between(target.end(), span.last) < 0) {
            throw Error("target outside dataset: " + std::string(to_string(target.name)) + " " +
                        format_date(target.start) + ".." + format_date(target.end()));
        }
        for (UserClass cls : classes) {
            for (ContextRatio ratio : ratios) {
                Scenario s = make_scenario(target, cls, ratio);
                if (days_between(span.first, s.context_start) < 0) {
                    throw Error("insufficient history for scenario " + s.id() + ": context starts " +
                                format_date(s.context_start) + ", data starts " +
                                format_date(span.first));
                }
                if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
            }
        }
    }
    return out;
}

ScenarioSlice slice(const DailySeries& series, const Scenario& scenario) {
    auto first = series.index_of(scenario.context_start);
    auto target = series.index_of(scenario.target.start);
    auto last = series.index_of(scenario.target.end());
    if (!first || !target || !last) throw Error("scenario outside series: " + scenario.id());
    return {series.slice(*first, static_cast<std::size_t>(scenario.context_days)),
            series.slice(*target, static_cast<std::size_t>(scenario.target.horizon_days))};
}

std::string manifest_fragment(std::span<const Scenario> scenarios) {
    std::ostringstream out;
    for (const auto& s : scenarios) {
        out << "scenario=" << s.id() << " context=" << format_date(s.context_start) << ".."
            << format_date(s.context_end()) << " (" << s.context_days << "d) actuals="
            << format_date(s.target.start) << ".." << format_date(s.target.end()) << " ("
            << s.target.horizon_days << "d)\n";
    }
    return out.str();
}

}  // namespace horizonbench
