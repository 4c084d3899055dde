#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "loranrec/convert/export.hpp"
#include "loranrec/convert/summary.hpp"

namespace loranrec {

struct SessionStats {
  std::vector<std::filesystem::path> export_dirs;
  std::vector<TimelineRecord> timeline;
  TimelineSummary summary;
};

// Loads every export directory (one holding manifest.json) below `root` and
// merges them into a single timeline.
SessionStats collect_stats(const std::filesystem::path& root, Millis gap_threshold = kDefaultGapThreshold);

// Writes snr_<station>.csv (timestamp,snr_db) for each station, or only for
// `station`, gps_fixes.csv (fixes only, no-fix records excluded) and
// summary.json. Returns the files written.
std::vector<std::filesystem::path> write_stats(const SessionStats& stats, const std::filesystem::path& out_dir,
                                               std::optional<StationId> station = std::nullopt);

}  // namespace loranrec
