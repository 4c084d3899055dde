#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "loranrec/classify/message_class.hpp"
#include "loranrec/parse/date_context.hpp"
#include "loranrec/parse/records.hpp"

namespace loranrec {

// Declared field precisions of serialized sentences.
inline constexpr int kMinuteDecimals = 4;
inline constexpr int kLoranDecimals = 1;  // toa, snr, ecd
inline constexpr int kAltitudeDecimals = 1;
inline constexpr int kHdopDecimals = 1;

// Drops a trailing `*hh` and splits on commas. Field 0 is the header ("$GPGGA").
std::vector<std::string_view> split_fields(std::string_view line);

// "ddmm.mmmm" with N/S, "dddmm.mmmm" with E/W. Throws ParseError.
double parse_coordinate(std::string_view value, char hemisphere);
inline double parse_coordinate(std::string_view value, std::string_view hemisphere) {
  return parse_coordinate(value, hemisphere.size() == 1 ? hemisphere[0] : '?');
}

// "hhmmss" with up to three fractional digits.
Millis parse_time_of_day(std::string_view value);

// $--GGA: time, lat, N/S, lon, E/W, quality, satellites, hdop, altitude, M,
// geoid separation, M, dgps age, dgps station (15 fields with the header).
// Empty position with quality 0 is a no-fix record. The context is only
// touched once every field has parsed.
GpsFix parse_gga(std::span<const std::string_view> fields, DateContext& ctx);

struct DateUpdate {
  Date date;
  std::optional<Millis> tod;
  DateSource source;
};

// $--ZDA (dd,mm,yyyy) or $--RMC (ddmmyy, two-digit years 80-99 are 19xx).
DateUpdate parse_date_sentence(std::span<const std::string_view> fields, const MessageClass& cls);

// Seeds an empty context, moves the date forward, or ignores a stale date.
void apply_date_update(std::optional<DateContext>& ctx, const DateUpdate& update);

// $PLRM,<hhmmss.sss>,<gri>,<role>,<toa_us>,<snr_db>,<ecd_us>*hh
LoranMeasurement parse_loran(std::span<const std::string_view> fields, DateContext& ctx);

// Checksum-terminated sentences without line terminator. Values are rounded
// to the declared precisions; parse(serialize(r)) == quantize(r).
std::string serialize(const GpsFix& fix);
std::string serialize(const LoranMeasurement& m);
std::string serialize_zda(UtcInstant t);
// RMC carrying the fix's time, position and date (speed and course zero).
std::string serialize_rmc(const GpsFix& fix);

// Rounds a record to what its serialized form can carry.
GpsFix quantize(const GpsFix& fix);
LoranMeasurement quantize(const LoranMeasurement& m);
double quantize_decimal(double value, int decimals);
double quantize_coordinate(double degrees);

}  // namespace loranrec
