#include "loranrec/time.hpp"

#include <charconv>
#include <cstdio>

#include "loranrec/error.hpp"

namespace loranrec {
namespace {

using std::chrono::days;
using std::chrono::floor;
using std::chrono::sys_days;

bool parse_uint(std::string_view s, int& out) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

std::optional<UtcInstant> build(int y, int mo, int d, int h, int mi, int s, int ms) {
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(mo)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok() || h > 23 || mi > 59 || s > 59 || ms > 999) return std::nullopt;
  return make_instant(date, std::chrono::hours(h) + std::chrono::minutes(mi) + std::chrono::seconds(s) + Millis(ms));
}

}  // namespace

Date date_of(UtcInstant t) { return Date{floor<days>(t)}; }

Millis time_of_day(UtcInstant t) { return t - floor<days>(t); }

UtcInstant make_instant(Date date, Millis tod) { return UtcInstant{sys_days{date}} + tod; }

std::string format_date(Date d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()), static_cast<unsigned>(d.month()),
                static_cast<unsigned>(d.day()));
  return buf;
}

std::string format_iso8601(UtcInstant t) {
  const Date d = date_of(t);
  const auto tod = time_of_day(t).count();
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()),
                static_cast<long long>(tod / 3600000), static_cast<long long>(tod / 60000 % 60),
                static_cast<long long>(tod / 1000 % 60), static_cast<long long>(tod % 1000));
  return buf;
}

std::string format_iso8601_basic(UtcInstant t) {
  const Date d = date_of(t);
  const auto tod = time_of_day(t).count();
  char buf[96];
  std::snprintf(buf, sizeof buf, "%04d%02u%02uT%02lld%02lld%02lldZ", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()),
                static_cast<long long>(tod / 3600000), static_cast<long long>(tod / 60000 % 60),
                static_cast<long long>(tod / 1000 % 60));
  return buf;
}

std::optional<Date> try_parse_date(std::string_view s) {
  int y = 0, m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
  if (!parse_uint(s.substr(0, 4), y) || !parse_uint(s.substr(5, 2), m) || !parse_uint(s.substr(8, 2), d)) {
    return std::nullopt;
  }
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::optional<UtcInstant> try_parse_iso8601(std::string_view s) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0, ms = 0;
  if (s.empty() || s.back() != 'Z') return std::nullopt;
  s.remove_suffix(1);
  if (s.size() == 15 && s[8] == 'T') {
    // basic form
    if (!parse_uint(s.substr(0, 4), y) || !parse_uint(s.substr(4, 2), mo) || !parse_uint(s.substr(6, 2), d) ||
        !parse_uint(s.substr(9, 2), h) || !parse_uint(s.substr(11, 2), mi) || !parse_uint(s.substr(13, 2), sec)) {
      return std::nullopt;
    }
    return build(y, mo, d, h, mi, sec, 0);
  }
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || s[10] != 'T' || s[13] != ':' || s[16] != ':') {
    return std::nullopt;
  }
  if (!parse_uint(s.substr(0, 4), y) || !parse_uint(s.substr(5, 2), mo) || !parse_uint(s.substr(8, 2), d) ||
      !parse_uint(s.substr(11, 2), h) || !parse_uint(s.substr(14, 2), mi) || !parse_uint(s.substr(17, 2), sec)) {
    return std::nullopt;
  }
  if (s.size() > 19) {
    if (s[19] != '.') return std::nullopt;
    auto frac = s.substr(20);
    if (frac.empty() || frac.size() > 3 || !parse_uint(frac, ms)) return std::nullopt;
    for (std::size_t i = frac.size(); i < 3; ++i) ms *= 10;
  }
  return build(y, mo, d, h, mi, sec, ms);
}

UtcInstant parse_iso8601(std::string_view s) {
  if (auto t = try_parse_iso8601(s)) return *t;
  throw ConfigError("malformed UTC timestamp '" + std::string(s) + "'");
}

Millis parse_duration(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  long long value = 0;
  if (i == 0 || !std::from_chars(s.data(), s.data() + i, value).ptr) {
    throw ConfigError("malformed duration '" + std::string(s) + "'");
  }
  const auto unit = s.substr(i);
  using namespace std::chrono;
  if (unit.empty() || unit == "s") return seconds(value);
  if (unit == "ms") return Millis(value);
  if (unit == "min" || unit == "m") return minutes(value);
  if (unit == "h") return hours(value);
  if (unit == "d") return hours(24 * value);
  throw ConfigError("unknown duration unit in '" + std::string(s) + "'");
}

std::string format_duration(Millis d) {
  const auto ms = d.count();
  if (ms % 3600000 == 0) return std::to_string(ms / 3600000) + "h";
  if (ms % 60000 == 0) return std::to_string(ms / 60000) + "min";
  if (ms % 1000 == 0) return std::to_string(ms / 1000) + "s";
  return std::to_string(ms) + "ms";
}

}  // namespace loranrec
