#include "loranrec/parse/records.hpp"

#include <charconv>

#include "loranrec/error.hpp"

namespace loranrec {

std::optional<StationRole> station_role_from_char(char c) {
  switch (c) {
    case 'M': return StationRole::kM;
    case 'V': return StationRole::kV;
    case 'W': return StationRole::kW;
    case 'X': return StationRole::kX;
    case 'Y': return StationRole::kY;
    case 'Z': return StationRole::kZ;
    default: return std::nullopt;
  }
}

std::string StationId::to_string() const { return std::to_string(gri) + to_char(role); }

StationId StationId::parse(std::string_view text) {
  if (text.size() != 5) throw ConfigError("station designator '" + std::string(text) + "' must look like 9930M");
  StationId id;
  auto [p, ec] = std::from_chars(text.data(), text.data() + 4, id.gri);
  const auto role = station_role_from_char(text[4]);
  if (ec != std::errc{} || p != text.data() + 4 || id.gri < kMinGri || id.gri > kMaxGri || !role) {
    throw ConfigError("invalid station designator '" + std::string(text) + "'");
  }
  id.role = *role;
  return id;
}

}  // namespace loranrec
