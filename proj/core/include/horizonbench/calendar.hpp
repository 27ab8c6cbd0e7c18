#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace horizonbench {

/// Plain calendar date. No time zones anywhere in the harness.
using Date = std::chrono::year_month_day;

/// Parses `YYYY-MM-DD`. Returns nullopt for anything else, including
/// well-formed but impossible dates such as 2011-02-30.
std::optional<Date> parse_date(std::string_view text);

/// Same as parse_date but throws InvalidArgument naming `what`.
Date require_date(std::string_view text, std::string_view what = "date");

std::string format_date(const Date& d);

Date add_days(const Date& d, long long n);

/// b - a in days.
long long days_between(const Date& a, const Date& b);

/// Days since 1970-01-01; used as an absolute time axis for seasonality.
long long day_number(const Date& d);

/// Monday of ISO week `week` of ISO year `iso_year`.
Date iso_week_start(int iso_year, unsigned week);

Date add_months(const Date& d, int months);

}  // namespace horizonbench
