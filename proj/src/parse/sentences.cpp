#include "loranrec/parse/sentences.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "loranrec/classify/checksum.hpp"
#include "loranrec/error.hpp"

namespace loranrec {
namespace {

using namespace std::chrono;

constexpr long long kPow10[] = {1, 10, 100, 1000, 10000, 100000};

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

// [+-]digits[.digits]
double parse_decimal(std::string_view s, const char* field) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  const auto dot = body.find('.');
  const auto int_part = body.substr(0, dot);
  const auto frac_part = dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (!all_digits(int_part) || (dot != std::string_view::npos && !all_digits(frac_part))) {
    throw ParseError(field, "not a decimal number: '" + std::string(s) + "'");
  }
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError(field, "unparsable number");
  return v;
}

int parse_int(std::string_view s, const char* field) {
  if (!all_digits(s)) throw ParseError(field, "not an unsigned integer: '" + std::string(s) + "'");
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw ParseError(field, "integer out of range");
  return v;
}

std::optional<double> optional_decimal(std::string_view s, const char* field) {
  if (s.empty()) return std::nullopt;
  return parse_decimal(s, field);
}

void expect_fields(std::span<const std::string_view> fields, std::size_t n, const char* sentence) {
  if (fields.size() != n) {
    throw ParseError("field_count", std::string(sentence) + " expects " + std::to_string(n) + " fields, got " +
                                        std::to_string(fields.size()));
  }
}

// Fixed-point text of round(value * 10^decimals), e.g. (-12.34, 1) -> "-12.3".
std::string format_fixed(double value, int decimals) {
  const long long scaled = std::llround(value * static_cast<double>(kPow10[decimals]));
  const long long mag = scaled < 0 ? -scaled : scaled;
  std::string out = scaled < 0 ? "-" : "";
  out += std::to_string(mag / kPow10[decimals]);
  if (decimals > 0) {
    std::string frac = std::to_string(mag % kPow10[decimals]);
    out += '.';
    out.append(static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += frac;
  }
  return out;
}

std::string format_tod(UtcInstant t) {
  const auto ms = time_of_day(t).count();
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02lld%02lld%02lld.%03lld", static_cast<long long>(ms / 3600000),
                static_cast<long long>(ms / 60000 % 60), static_cast<long long>(ms / 1000 % 60),
                static_cast<long long>(ms % 1000));
  return buf;
}

// Coordinate as (field, hemisphere) at kMinuteDecimals minute decimals.
std::pair<std::string, char> format_coordinate(double degrees, bool is_lat) {
  const long long units_per_degree = 60 * kPow10[kMinuteDecimals];
  const long long total = std::llround(std::fabs(degrees) * static_cast<double>(units_per_degree));
  const long long whole = total / units_per_degree;
  const long long minute_units = total % units_per_degree;
  char buf[32];
  std::snprintf(buf, sizeof buf, is_lat ? "%02lld%02lld.%04lld" : "%03lld%02lld.%04lld", whole,
                minute_units / kPow10[kMinuteDecimals], minute_units % kPow10[kMinuteDecimals]);
  const bool negative = degrees < 0 && total != 0;
  return {buf, is_lat ? (negative ? 'S' : 'N') : (negative ? 'W' : 'E')};
}

Date make_date(int y, int m, int d) {
  const Date date{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
  if (!date.ok()) {
    throw ParseError("date", "invalid calendar date " + std::to_string(y) + "-" + std::to_string(m) + "-" +
                                 std::to_string(d));
  }
  return date;
}

}  // namespace

std::vector<std::string_view> split_fields(std::string_view line) {
  if (const auto star = line.rfind('*'); star != std::string_view::npos) line = line.substr(0, star);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_coordinate(std::string_view value, char hemisphere) {
  const bool is_lat = hemisphere == 'N' || hemisphere == 'S';
  const bool is_lon = hemisphere == 'E' || hemisphere == 'W';
  const char* field = is_lon ? "longitude" : "latitude";
  if (!is_lat && !is_lon) throw ParseError("hemisphere", "expected N, S, E or W");
  const auto dot = value.find('.');
  const auto int_part = value.substr(0, dot);
  const std::size_t degree_digits = is_lat ? 2 : 3;
  if (int_part.size() != degree_digits + 2 || !all_digits(int_part)) {
    throw ParseError(field, "expected " + std::string(is_lat ? "ddmm.mmmm" : "dddmm.mmmm") + ", got '" +
                                std::string(value) + "'");
  }
  const int degrees = parse_int(int_part.substr(0, degree_digits), field);
  const double minutes = parse_decimal(value.substr(degree_digits), field);
  if (minutes >= 60.0) throw ParseError(field, "minutes must be below 60");
  const double result = degrees + minutes / 60.0;
  if (result > (is_lat ? 90.0 : 180.0)) throw ParseError(field, "out of range");
  return (hemisphere == 'S' || hemisphere == 'W') ? -result : result;
}

Millis parse_time_of_day(std::string_view value) {
  const auto dot = value.find('.');
  const auto whole = value.substr(0, dot);
  if (whole.size() != 6 || !all_digits(whole)) throw ParseError("time", "expected hhmmss[.sss]");
  const int h = parse_int(whole.substr(0, 2), "time");
  const int m = parse_int(whole.substr(2, 2), "time");
  const int s = parse_int(whole.substr(4, 2), "time");
  if (h > 23 || m > 59 || s > 59) throw ParseError("time", "out of range: '" + std::string(value) + "'");
  int ms = 0;
  if (dot != std::string_view::npos) {
    const auto frac = value.substr(dot + 1);
    if (frac.empty() || frac.size() > 3 || !all_digits(frac)) throw ParseError("time", "bad fraction");
    ms = parse_int(frac, "time") * static_cast<int>(kPow10[3 - frac.size()]);
  }
  return hours(h) + minutes(m) + seconds(s) + Millis(ms);
}

GpsFix parse_gga(std::span<const std::string_view> fields, DateContext& ctx) {
  expect_fields(fields, 15, "GGA");
  GpsFix fix;
  const Millis tod = parse_time_of_day(fields[1]);
  fix.fix_quality = parse_int(fields[6], "fix_quality");
  const bool position_empty = fields[2].empty() && fields[3].empty() && fields[4].empty() && fields[5].empty();
  if (!position_empty) {
    fix.lat = parse_coordinate(fields[2], fields[3]);
    fix.lon = parse_coordinate(fields[4], fields[5]);
    if (fields[3] != "N" && fields[3] != "S") throw ParseError("lat_hemisphere", "expected N or S");
    if (fields[5] != "E" && fields[5] != "W") throw ParseError("lon_hemisphere", "expected E or W");
  } else if (fix.fix_quality != 0) {
    throw ParseError("position", "empty position with fix quality " + std::to_string(fix.fix_quality));
  }
  fix.num_sats = fields[7].empty() ? 0 : parse_int(fields[7], "num_sats");
  fix.hdop = optional_decimal(fields[8], "hdop");
  if (fix.hdop && *fix.hdop < 0) throw ParseError("hdop", "negative");
  fix.alt_m = optional_decimal(fields[9], "altitude");
  if (!fields[10].empty() && fields[10] != "M") throw ParseError("altitude_unit", "expected M");
  fix.timestamp = resolve_timestamp(tod, ctx);
  return fix;
}

DateUpdate parse_date_sentence(std::span<const std::string_view> fields, const MessageClass& cls) {
  if (cls.sentence == "ZDA") {
    expect_fields(fields, 7, "ZDA");
    DateUpdate u{make_date(parse_int(fields[4], "year"), parse_int(fields[3], "month"), parse_int(fields[2], "day")),
                 std::nullopt, DateSource::kZda};
    if (fields[4].size() != 4) throw ParseError("year", "expected four digits");
    if (!fields[1].empty()) u.tod = parse_time_of_day(fields[1]);
    return u;
  }
  if (cls.sentence == "RMC") {
    if (fields.size() < 12 || fields.size() > 14) {
      throw ParseError("field_count", "RMC expects 12 to 14 fields, got " + std::to_string(fields.size()));
    }
    const auto ddmmyy = fields[9];
    if (ddmmyy.size() != 6 || !all_digits(ddmmyy)) throw ParseError("date", "expected ddmmyy");
    const int yy = parse_int(ddmmyy.substr(4, 2), "date");
    DateUpdate u{make_date(yy >= 80 ? 1900 + yy : 2000 + yy, parse_int(ddmmyy.substr(2, 2), "date"),
                           parse_int(ddmmyy.substr(0, 2), "date")),
                 std::nullopt, DateSource::kRmc};
    if (!fields[1].empty()) u.tod = parse_time_of_day(fields[1]);
    return u;
  }
  throw ParseError("sentence", "not a date sentence: " + cls.store_name());
}

void apply_date_update(std::optional<DateContext>& ctx, const DateUpdate& update) {
  if (!ctx) {
    ctx = DateContext{update.date, update.tod, update.source};
    return;
  }
  if (update.date < ctx->current_date) return;
  ctx->current_date = update.date;
  if (update.tod) ctx->last_tod = update.tod;
  ctx->source = update.source;
}

LoranMeasurement parse_loran(std::span<const std::string_view> fields, DateContext& ctx) {
  expect_fields(fields, 7, "PLRM");
  LoranMeasurement m;
  const Millis tod = parse_time_of_day(fields[1]);
  m.gri = parse_int(fields[2], "gri");
  if (m.gri < kMinGri || m.gri > kMaxGri) {
    throw ParseError("gri", "designator " + std::to_string(m.gri) + " outside [4000, 9999]");
  }
  const auto role = fields[3].size() == 1 ? station_role_from_char(fields[3][0]) : std::nullopt;
  if (!role) throw ParseError("station_role", "unknown role '" + std::string(fields[3]) + "'");
  m.station_role = *role;
  m.toa_us = parse_decimal(fields[4], "toa_us");
  if (m.toa_us < 0 || m.toa_us >= m.gri * 10.0) throw ParseError("toa_us", "outside the GRI frame");
  m.snr_db = parse_decimal(fields[5], "snr_db");
  m.ecd_us = parse_decimal(fields[6], "ecd_us");
  m.timestamp = resolve_timestamp(tod, ctx);
  return m;
}

std::string serialize(const GpsFix& fix) {
  std::string body = "GPGGA," + format_tod(fix.timestamp) + ",";
  if (fix.lat && fix.lon) {
    const auto [lat, ns] = format_coordinate(*fix.lat, true);
    const auto [lon, ew] = format_coordinate(*fix.lon, false);
    body += lat + "," + ns + "," + lon + "," + ew + ",";
  } else {
    body += ",,,,";
  }
  char sats[8];
  std::snprintf(sats, sizeof sats, "%02d", fix.num_sats);
  body += std::to_string(fix.fix_quality) + "," + sats + ",";
  body += (fix.hdop ? format_fixed(*fix.hdop, kHdopDecimals) : "") + ",";
  body += (fix.alt_m ? format_fixed(*fix.alt_m, kAltitudeDecimals) : "") + ",M,,M,,";
  return with_checksum(body);
}

std::string serialize(const LoranMeasurement& m) {
  std::string body = "PLRM," + format_tod(m.timestamp) + "," + std::to_string(m.gri) + "," + to_char(m.station_role) +
                     "," + format_fixed(m.toa_us, kLoranDecimals) + "," + format_fixed(m.snr_db, kLoranDecimals) +
                     "," + format_fixed(m.ecd_us, kLoranDecimals);
  return with_checksum(body);
}

std::string serialize_zda(UtcInstant t) {
  const Date d = date_of(t);
  char buf[64];
  std::snprintf(buf, sizeof buf, "GPZDA,%s,%02u,%02u,%04d,00,00", format_tod(t).c_str(),
                static_cast<unsigned>(d.day()), static_cast<unsigned>(d.month()), static_cast<int>(d.year()));
  return with_checksum(buf);
}

std::string serialize_rmc(const GpsFix& fix) {
  const Date d = date_of(fix.timestamp);
  std::string body = "GPRMC," + format_tod(fix.timestamp) + "," + (fix.no_fix() ? "V" : "A") + ",";
  if (fix.lat && fix.lon) {
    const auto [lat, ns] = format_coordinate(*fix.lat, true);
    const auto [lon, ew] = format_coordinate(*fix.lon, false);
    body += lat + "," + ns + "," + lon + "," + ew + ",";
  } else {
    body += ",,,,";
  }
  char date[16];
  std::snprintf(date, sizeof date, "%02u%02u%02d", static_cast<unsigned>(d.day()), static_cast<unsigned>(d.month()),
                static_cast<int>(d.year()) % 100);
  body += std::string("0.0,0.0,") + date + ",,,A";
  return with_checksum(body);
}

double quantize_decimal(double value, int decimals) {
  return static_cast<double>(std::llround(value * static_cast<double>(kPow10[decimals]))) /
         static_cast<double>(kPow10[decimals]);
}

double quantize_coordinate(double degrees) {
  const long long units_per_degree = 60 * kPow10[kMinuteDecimals];
  const long long total = std::llround(std::fabs(degrees) * static_cast<double>(units_per_degree));
  const double value = static_cast<double>(total / units_per_degree) +
                       static_cast<double>(total % units_per_degree) / static_cast<double>(kPow10[kMinuteDecimals]) / 60.0;
  return (degrees < 0 && total != 0) ? -value : value;
}

GpsFix quantize(const GpsFix& fix) {
  GpsFix q = fix;
  if (q.lat && q.lon) {
    q.lat = quantize_coordinate(*q.lat);
    q.lon = quantize_coordinate(*q.lon);
  } else {
    q.lat.reset();
    q.lon.reset();
  }
  if (q.alt_m) q.alt_m = quantize_decimal(*q.alt_m, kAltitudeDecimals);
  if (q.hdop) q.hdop = quantize_decimal(*q.hdop, kHdopDecimals);
  return q;
}

LoranMeasurement quantize(const LoranMeasurement& m) {
  LoranMeasurement q = m;
  q.toa_us = quantize_decimal(m.toa_us, kLoranDecimals);
  q.snr_db = quantize_decimal(m.snr_db, kLoranDecimals);
  q.ecd_us = quantize_decimal(m.ecd_us, kLoranDecimals);
  return q;
}

}  // namespace loranrec
