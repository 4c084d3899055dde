#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "loranrec/convert/summary.hpp"
#include "loranrec/convert/timeline.hpp"

namespace loranrec {

// kColumns: comma-separated with a header row (.csv).
// kLines: one JSON object per line (.jsonl).
enum class ExportFormat { kColumns, kLines };

std::string to_string(ExportFormat f);
ExportFormat export_format_from_string(std::string_view s);
std::string_view extension(ExportFormat f);

inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kParseErrorsFile = "parse_errors.csv";

// Column schemas, in output order.
inline constexpr std::string_view kGpsColumns = "timestamp,lat_deg,lon_deg,alt_m,fix_quality,num_sats,hdop";
inline constexpr std::string_view kLoranColumns = "timestamp,gri,station_role,toa_us,snr_db,ecd_us";
inline constexpr std::string_view kAllColumns =
    "timestamp,record_type,lat_deg,lon_deg,alt_m,fix_quality,num_sats,hdop,gri,station_role,toa_us,snr_db,ecd_us";

struct ExportFile {
  std::string path;  // relative to the export directory
  ExportFormat format = ExportFormat::kColumns;
  std::string digest;
  std::uint64_t records = 0;
};

struct SessionManifest {
  std::string session_id;
  std::string segment;
  std::optional<Interval> time_span;
  std::uint64_t gps_fix = 0;
  std::map<std::string, std::uint64_t> loran;  // per station designator
  std::uint64_t parse_errors = 0;
  std::uint64_t quarantined = 0;
  std::uint64_t unparsed = 0;  // recognised lines no parser handles
  std::vector<ExportFile> export_files;
  Millis gap_threshold = kDefaultGapThreshold;
  std::vector<Interval> gap_list;

  std::uint64_t loran_total() const;
  nlohmann::ordered_json to_json() const;
  static SessionManifest from_json(const nlohmann::json& j);
  static SessionManifest load(const std::filesystem::path& dir);
  // Recomputes every export digest; returns the files that do not match.
  std::vector<std::string> verify(const std::filesystem::path& dir) const;
};

struct ExportOptions {
  ExportFormat format = ExportFormat::kColumns;
  std::string session_id;
  std::string segment;
  std::uint64_t parse_errors = 0;
  std::uint64_t quarantined = 0;
  std::uint64_t unparsed = 0;
  Millis gap_threshold = kDefaultGapThreshold;
  // Invoked after each timeline file is complete.
  std::function<void(std::string_view file)> on_file_written;
};

// Writes timeline_gps, timeline_loran and timeline_all in the chosen format
// plus manifest.json. Output is a pure function of the inputs. On any failure
// the files written so far are removed and IoError propagates.
SessionManifest export_timeline(std::span<const TimelineRecord> timeline, const std::filesystem::path& out_dir,
                                const ExportOptions& options);

// Text of one file, exposed for tests and the ground-truth writer.
std::string render_gps(std::span<const TimelineRecord> timeline, ExportFormat format);
std::string render_loran(std::span<const TimelineRecord> timeline, ExportFormat format);
std::string render_all(std::span<const TimelineRecord> timeline, ExportFormat format);

// Reads timeline_gps and timeline_loran back from an export directory.
struct ImportedTimeline {
  std::vector<GpsFix> gps;
  std::vector<LoranMeasurement> loran;
};
ImportedTimeline import_timeline(const std::filesystem::path& dir, ExportFormat format);
std::vector<GpsFix> import_gps(std::string_view text, ExportFormat format);
std::vector<LoranMeasurement> import_loran(std::string_view text, ExportFormat format);

}  // namespace loranrec
