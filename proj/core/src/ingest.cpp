#include "horizonbench/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "csv.hpp"
#include "horizonbench/error.hpp"

namespace horizonbench {

namespace {

using detail::split_fields;
using detail::to_lower;

// Header aliases for the UCI day-level file.
const std::map<std::string, std::string, std::less<>> kColumnAliases = {
    {"dteday", "date"},
};

std::string canonical_column(std::string_view name) {
    std::string lower = to_lower(name);
    if (auto it = kColumnAliases.find(lower); it != kColumnAliases.end()) return it->second;
    return lower;
}

std::optional<std::size_t> find_column(const std::vector<std::string>& header, std::string_view name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
}

std::vector<std::string> read_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("empty file: missing header row");
    std::vector<std::string> header;
    for (auto f : split_fields(line)) header.push_back(canonical_column(f));
    return header;
}

std::optional<std::chrono::sys_time<std::chrono::minutes>> parse_timestamp(std::string_view s) {
    using namespace std::chrono;
    if (s.size() < 16 || (s[10] != ' ' && s[10] != 'T') || s[13] != ':') return std::nullopt;
    auto date = parse_date(s.substr(0, 10));
    if (!date) return std::nullopt;
    auto two = [](std::string_view t, int& out) {
        if (t.size() != 2 || !std::isdigit(static_cast<unsigned char>(t[0])) ||
            !std::isdigit(static_cast<unsigned char>(t[1]))) {
            return false;
        }
        out = (t[0] - '0') * 10 + (t[1] - '0');
        return true;
    };
    int hh = 0, mm = 0;
    if (!two(s.substr(11, 2), hh) || !two(s.substr(14, 2), mm) || hh > 23 || mm > 59) {
        return std::nullopt;
    }
    // Seconds (":SS") are accepted and truncated to the minute.
    std::string_view rest = s.substr(16);
    if (!rest.empty()) {
        int ss = 0;
        if (rest.size() != 3 || rest[0] != ':' || !two(rest.substr(1), ss) || ss > 59) {
            return std::nullopt;
        }
    }
    return sys_days{*date} + hours{hh} + minutes{mm};
}

}  // namespace

std::string_view to_string(UserClass c) {
    return c == UserClass::casual ? "casual" : "registered";
}

std::optional<UserClass> parse_user_class(std::string_view text) {
    std::string lower = to_lower(detail::trim(text));
    if (lower == "casual") return UserClass::casual;
    if (lower == "registered") return UserClass::registered;
    return std::nullopt;
}

DailySeries::DailySeries(Date start_date, std::vector<std::int64_t> counts, UserClass user_class)
    : start_(start_date), counts_(std::move(counts)), class_(user_class) {
    if (!start_.ok()) throw InvalidArgument("invalid start date");
    if (counts_.empty()) throw InvalidArgument("daily series must have at least one value");
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        if (counts_[i] < 0) {
            throw InvalidArgument("invalid count: negative value on " + format_date(date_at(i)));
        }
    }
}

Date DailySeries::end_date() const { return date_at(counts_.size() - 1); }

Date DailySeries::date_at(std::size_t index) const {
    return add_days(start_, static_cast<long long>(index));
}

std::vector<double> DailySeries::values() const {
    return {counts_.begin(), counts_.end()};
}

std::optional<std::size_t> DailySeries::index_of(const Date& d) const {
    long long offset = days_between(start_, d);
    if (offset < 0 || offset >= static_cast<long long>(counts_.size())) return std::nullopt;
    return static_cast<std::size_t>(offset);
}

DailySeries DailySeries::slice(std::size_t offset, std::size_t length) const {
    if (length == 0 || offset > counts_.size() || length > counts_.size() - offset) {
        throw Error("scenario outside series");
    }
    auto first = counts_.begin() + static_cast<std::ptrdiff_t>(offset);
    return DailySeries(date_at(offset), {first, first + static_cast<std::ptrdiff_t>(length)}, class_);
}

DailySeries aggregate_daily(std::span<const RentalRecord> records, UserClass user_class) {
    std::map<long long, std::int64_t> per_day;
    for (const auto& r : records) {
        if (r.user_class != user_class) continue;
        auto day = std::chrono::floor<std::chrono::days>(r.timestamp);
        ++per_day[day.time_since_epoch().count()];
    }
    if (per_day.empty()) throw Error("no records for class " + std::string(to_string(user_class)));

    const long long first = per_day.begin()->first;
    const long long last = per_day.rbegin()->first;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(last - first + 1), 0);
    for (auto [day, n] : per_day) counts[static_cast<std::size_t>(day - first)] = n;
    Date start{std::chrono::sys_days{std::chrono::days{first}}};
    return DailySeries(start, std::move(counts), user_class);
}

std::vector<RentalRecord> parse_rental_csv(std::istream& in) {
    auto header = read_header(in);
    auto ts_col = find_column(header, "started_at");
    auto type_col = find_column(header, "member_type");
    if (!ts_col || !type_col) {
        throw InvalidArgument("raw rental file needs 'started_at' and 'member_type' columns");
    }
    std::vector<RentalRecord> out;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() <= std::max(*ts_col, *type_col)) {
            throw InvalidArgument("line " + std::to_string(line_no) + ": too few columns");
        }
        auto ts = parse_timestamp(fields[*ts_col]);
        if (!ts) {
            throw InvalidArgument("line " + std::to_string(line_no) + ": unparseable timestamp '" +
                                  std::string(fields[*ts_col]) + "'");
        }
        auto cls = parse_user_class(fields[*type_col]);
        if (!cls) {
            throw InvalidArgument("line " + std::to_string(line_no) + ": unknown member type '" +
                                  std::string(fields[*type_col]) + "'");
        }
        out.push_back({*ts, *cls});
    }
    return out;
}

std::vector<RentalRecord> load_rental_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open data file: " + path.string());
    return parse_rental_csv(in);
}

DailySeries parse_daily_csv(std::istream& in, UserClass user_class) {
    auto header = read_header(in);
    auto date_col = find_column(header, "date");
    if (!date_col) throw InvalidArgument("daily file needs a 'date' column");
    auto value_col = find_column(header, to_string(user_class));
    if (!value_col) {
        throw InvalidArgument("unknown user class column '" + std::string(to_string(user_class)) + "'");
    }

    std::optional<Date> start;
    std::optional<Date> previous;
    std::vector<std::int64_t> counts;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (detail::trim(line).empty()) continue;
        ++row;
        auto fields = split_fields(line);
        if (fields.size() <= std::max(*date_col, *value_col)) {
            throw InvalidArgument("row " + std::to_string(row) + ": too few columns");
        }
        auto date = parse_date(fields[*date_col]);
        if (!date) {
            throw InvalidArgument("row " + std::to_string(row) + ": invalid date '" +
                                  std::string(fields[*date_col]) + "'");
        }
        if (previous && days_between(*previous, *date) != 1) {
            throw InvalidArgument("non-contiguous dates at row " + std::to_string(row));
        }
        std::string_view raw = fields[*value_col];
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), value);
        if (ec != std::errc{} || ptr != raw.data() + raw.size() || value < 0) {
            throw InvalidArgument("invalid count at row " + std::to_string(row) + ": '" +
                                  std::string(raw) + "'");
        }
        if (!start) start = date;
        previous = date;
        counts.push_back(value);
    }
    if (!start) throw InvalidArgument("daily file has no data rows");
    return DailySeries(*start, std::move(counts), user_class);
}

DailySeries load_daily_csv(const std::filesystem::path& path, UserClass user_class) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open data file: " + path.string());
    return parse_daily_csv(in, user_class);
}

void write_daily_csv(std::ostream& out, const DailySeries& casual, const DailySeries& registered) {
    if (casual.start_date() != registered.start_date() || casual.size() != registered.size()) {
        throw InvalidArgument("casual and registered series must cover the same dates");
    }
    out << "date,casual,registered\n";
    for (std::size_t i = 0; i < casual.size(); ++i) {
        out << format_date(casual.date_at(i)) << ',' << casual[i] << ',' << registered[i] << '\n';
    }
}

bool is_rental_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open data file: " + path.string());
    auto header = read_header(in);
    return find_column(header, "started_at").has_value();
}

DailySeries load_series(const std::filesystem::path& path, UserClass user_class) {
    if (is_rental_csv(path)) {
        auto records = load_rental_csv(path);
        return aggregate_daily(records, user_class);
    }
    return load_daily_csv(path, user_class);
}

}  // namespace horizonbench
