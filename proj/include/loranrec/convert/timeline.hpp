#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "loranrec/parse/records.hpp"

namespace loranrec {

struct TimelineRecord {
  UtcInstant timestamp;
  std::variant<GpsFix, LoranMeasurement> payload;
  std::uint64_t arrival_index = 0;

  bool is_gps() const { return std::holds_alternative<GpsFix>(payload); }
  const GpsFix& gps() const { return std::get<GpsFix>(payload); }
  const LoranMeasurement& loran() const { return std::get<LoranMeasurement>(payload); }
  bool operator==(const TimelineRecord&) const = default;
};

// Merges both streams into one timeline ordered by (timestamp, GPS before
// Loran, arrival index). Each record's source_line is its arrival index.
// Records with identical keys keep their input order.
std::vector<TimelineRecord> merge_sort(std::span<const GpsFix> gps, std::span<const LoranMeasurement> loran);

}  // namespace loranrec
