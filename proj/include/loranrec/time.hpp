#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace loranrec {

using Millis = std::chrono::milliseconds;
using UtcInstant = std::chrono::sys_time<Millis>;
using Date = std::chrono::year_month_day;

inline constexpr Millis kDay = std::chrono::hours(24);

struct Interval {
  UtcInstant start;
  UtcInstant end;

  Millis length() const { return end - start; }
  bool operator==(const Interval&) const = default;
};

Date date_of(UtcInstant t);
// Milliseconds since 00:00:00 of the instant's UTC day.
Millis time_of_day(UtcInstant t);
UtcInstant make_instant(Date date, Millis tod);

// 2020-04-17T09:27:50.000Z
std::string format_iso8601(UtcInstant t);
// 20200417T092750Z (seconds resolution, used in file names)
std::string format_iso8601_basic(UtcInstant t);
std::string format_date(Date d);

// Accepts "YYYY-MM-DDTHH:MM:SS[.fff]Z" and the basic form "YYYYMMDDTHHMMSSZ".
std::optional<UtcInstant> try_parse_iso8601(std::string_view s);
// Throws ConfigError on malformed input.
UtcInstant parse_iso8601(std::string_view s);
std::optional<Date> try_parse_date(std::string_view s);  // YYYY-MM-DD

// Durations like "500ms", "1s", "10min", "2h", "1d"; a bare integer is seconds.
Millis parse_duration(std::string_view s);
std::string format_duration(Millis d);

}  // namespace loranrec
