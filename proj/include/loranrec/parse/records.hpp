#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "loranrec/time.hpp"

namespace loranrec {

struct GpsFix {
  UtcInstant timestamp;
  std::optional<double> lat;  // decimal degrees, north positive
  std::optional<double> lon;  // decimal degrees, east positive
  std::optional<double> alt_m;
  int fix_quality = 0;  // 0 = no fix
  int num_sats = 0;
  std::optional<double> hdop;
  std::uint64_t source_line = 0;

  // No-fix records are kept in the timeline but excluded from position statistics.
  bool no_fix() const { return fix_quality == 0 || !lat || !lon; }
  bool operator==(const GpsFix&) const = default;
};

enum class StationRole : char { kM = 'M', kV = 'V', kW = 'W', kX = 'X', kY = 'Y', kZ = 'Z' };

std::optional<StationRole> station_role_from_char(char c);
inline char to_char(StationRole r) { return static_cast<char>(r); }

inline constexpr int kMinGri = 4000;
inline constexpr int kMaxGri = 9999;

// A Loran transmitter: chain GRI designator plus role, written "9930M".
struct StationId {
  int gri = 0;
  StationRole role = StationRole::kM;

  std::string to_string() const;
  // Throws ConfigError.
  static StationId parse(std::string_view text);
  auto operator<=>(const StationId&) const = default;
};

struct LoranMeasurement {
  UtcInstant timestamp;
  int gri = 0;  // designator; the repetition interval is gri * 10 us
  StationRole station_role = StationRole::kM;
  double toa_us = 0;  // time of arrival within the GRI frame
  double snr_db = 0;
  double ecd_us = 0;  // envelope-to-cycle difference
  std::uint64_t source_line = 0;

  StationId station() const { return {gri, station_role}; }
  bool operator==(const LoranMeasurement&) const = default;
};

}  // namespace loranrec
