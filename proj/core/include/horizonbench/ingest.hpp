#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "horizonbench/calendar.hpp"

namespace horizonbench {

enum class UserClass { casual, registered };

std::string_view to_string(UserClass c);

/// Case-insensitive; accepts exactly "casual" and "registered".
std::optional<UserClass> parse_user_class(std::string_view text);

inline constexpr UserClass kAllUserClasses[] = {UserClass::casual, UserClass::registered};

/// One raw rental. Minute precision, no time zone.
struct RentalRecord {
    std::chrono::sys_time<std::chrono::minutes> timestamp;
    UserClass user_class;
};

/// Gapless daily ride counts for one user class. Index i is start_date + i days.
class DailySeries {
public:
    /// Throws InvalidArgument if `counts` is empty or has a negative entry.
    DailySeries(Date start_date, std::vector<std::int64_t> counts, UserClass user_class);

    [[nodiscard]] const Date& start_date() const noexcept { return start_; }
    [[nodiscard]] Date end_date() const;
    [[nodiscard]] Date date_at(std::size_t index) const;
    [[nodiscard]] UserClass user_class() const noexcept { return class_; }

    [[nodiscard]] std::span<const std::int64_t> counts() const noexcept { return counts_; }
    [[nodiscard]] std::size_t size() const noexcept { return counts_.size(); }
    [[nodiscard]] std::int64_t operator[](std::size_t i) const { return counts_[i]; }

    /// Counts as doubles, for the numerical code.
    [[nodiscard]] std::vector<double> values() const;

    /// Index of `d`, or nullopt when outside the series.
    [[nodiscard]] std::optional<std::size_t> index_of(const Date& d) const;

    /// Sub-series [offset, offset + length). Throws Error "scenario outside series"
    /// when the range does not fit.
    [[nodiscard]] DailySeries slice(std::size_t offset, std::size_t length) const;

    friend bool operator==(const DailySeries&, const DailySeries&) = default;

private:
    Date start_;
    std::vector<std::int64_t> counts_;
    UserClass class_;
};

/// Counts records of `user_class` per calendar day, zero-filling interior days
/// without rentals. Throws Error "no records for class" when nothing matches.
DailySeries aggregate_daily(std::span<const RentalRecord> records, UserClass user_class);

/// Parses a raw rental CSV with columns `started_at` (ISO-8601 datetime) and
/// `member_type` (casual/registered). Errors carry the 1-based line number.
std::vector<RentalRecord> parse_rental_csv(std::istream& in);
std::vector<RentalRecord> load_rental_csv(const std::filesystem::path& path);

/// Parses a day-level CSV with `date` (alias `dteday`) and per-class count
/// columns named `casual` and `registered`.
DailySeries parse_daily_csv(std::istream& in, UserClass user_class);
DailySeries load_daily_csv(const std::filesystem::path& path, UserClass user_class);

/// Writes `date,casual,registered`. Both series must cover the same dates.
void write_daily_csv(std::ostream& out, const DailySeries& casual, const DailySeries& registered);

/// True when the file's header names the raw-record columns.
bool is_rental_csv(const std::filesystem::path& path);

/// Loads either file flavour and returns the series for `user_class`.
DailySeries load_series(const std::filesystem::path& path, UserClass user_class);

}  // namespace horizonbench
