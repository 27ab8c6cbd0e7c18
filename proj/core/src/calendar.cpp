#include "horizonbench/calendar.hpp"

#include <charconv>
#include <cstdio>

#include "horizonbench/error.hpp"

namespace horizonbench {

namespace {

template <typename T>
bool parse_fixed(std::string_view s, T& out) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::optional<Date> parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    int y = 0;
    unsigned m = 0, d = 0;
    if (!parse_fixed(text.substr(0, 4), y) || !parse_fixed(text.substr(5, 2), m) ||
        !parse_fixed(text.substr(8, 2), d)) {
        return std::nullopt;
    }
    Date date{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
    if (!date.ok()) return std::nullopt;
    return date;
}

Date require_date(std::string_view text, std::string_view what) {
    auto d = parse_date(text);
    if (!d) {
        throw InvalidArgument("invalid " + std::string(what) + ": '" + std::string(text) +
                              "' (expected YYYY-MM-DD)");
    }
    return *d;
}

std::string format_date(const Date& d) {
    char buf[16];
    int y = static_cast<int>(d.year());
    auto m = static_cast<unsigned>(d.month());
    auto dd = static_cast<unsigned>(d.day());
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, dd);
    return buf;
}

Date add_days(const Date& d, long long n) {
    return Date{std::chrono::sys_days{d} + std::chrono::days{n}};
}

long long days_between(const Date& a, const Date& b) {
    return (std::chrono::sys_days{b} - std::chrono::sys_days{a}).count();
}

long long day_number(const Date& d) {
    return std::chrono::sys_days{d}.time_since_epoch().count();
}

Date iso_week_start(int iso_year, unsigned week) {
    using namespace std::chrono;
    // Jan 4 is always in ISO week 1.
    sys_days jan4{year{iso_year} / January / 4};
    weekday wd{jan4};
    sys_days week1 = jan4 - days{wd.iso_encoding() - 1};
    return Date{week1 + days{7 * (static_cast<long long>(week) - 1)}};
}

Date add_months(const Date& d, int months) {
    using namespace std::chrono;
    year_month ym = year_month{d.year(), d.month()} + std::chrono::months{months};
    Date out = ym / d.day();
    if (!out.ok()) out = ym / last;
    return out;
}

}  // namespace horizonbench
