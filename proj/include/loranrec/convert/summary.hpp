#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "loranrec/convert/timeline.hpp"

namespace loranrec {

inline constexpr Millis kDefaultGapThreshold = std::chrono::minutes(5);

struct SeriesStats {
  std::uint64_t count = 0;
  double min = 0;
  double mean = 0;
  double max = 0;
};

struct BoundingBox {
  double min_lat = 0;
  double max_lat = 0;
  double min_lon = 0;
  double max_lon = 0;
};

struct TimelineSummary {
  std::map<StationId, SeriesStats> snr;
  std::uint64_t gps_records = 0;
  std::uint64_t gps_fixes = 0;  // excludes no-fix records
  std::uint64_t no_fix = 0;
  std::optional<BoundingBox> bbox;
  std::optional<Interval> span;
  std::vector<Interval> gaps;  // silent stretches longer than the threshold

  nlohmann::ordered_json to_json() const;
};

// Empty timelines yield a zeroed summary.
TimelineSummary summarize(std::span<const TimelineRecord> timeline, Millis gap_threshold = kDefaultGapThreshold);

// Intervals between consecutive timestamps (sorted internally) longer than `threshold`.
std::vector<Interval> find_gaps(std::vector<UtcInstant> timestamps, Millis threshold);

}  // namespace loranrec
