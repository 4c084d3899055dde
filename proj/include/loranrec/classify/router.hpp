#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loranrec/classify/checksum.hpp"
#include "loranrec/classify/message_class.hpp"
#include "loranrec/time.hpp"

namespace loranrec {

inline constexpr std::string_view kQuarantineStore = "quarantine";
inline constexpr std::string_view kIndexFile = "index.csv";
inline constexpr std::string_view kReportFile = "report.json";

enum class QuarantineReason { kNone, kUnknownClass, kInvalidChecksum, kOversized };

std::string to_string(QuarantineReason r);

struct ClassifiedLine {
  std::string raw;  // without terminator
  MessageClass cls;
  ChecksumStatus checksum = ChecksumStatus::kAbsent;
  std::uint64_t segment_offset = 0;
  std::uint64_t line_number = 0;  // 1-based
  std::string store;              // output store the line was routed to
  QuarantineReason quarantine = QuarantineReason::kNone;
};

struct RouteOptions {
  bool quarantine_invalid_checksums = true;
  std::size_t max_line_bytes = 8192;
  // Invoked after each routed line with its line number.
  std::function<void(std::uint64_t)> on_line;
};

struct ClassificationReport {
  std::string segment;  // file name of the segment
  std::optional<UtcInstant> segment_open_time;
  std::string segment_digest;
  std::map<std::string, std::uint64_t> counts;        // store name (incl. quarantine) -> lines
  std::map<std::string, std::string> output_paths;    // store name -> file name in the output dir
  std::map<std::string, std::uint64_t> quarantine_reasons;
  std::map<std::string, std::uint64_t> checksum_counts;
  std::uint64_t total_lines = 0;
  std::uint64_t quarantined_lines = 0;
  bool trailing_unterminated = false;
  bool quarantine_invalid_checksums = true;

  nlohmann::ordered_json to_json() const;
  static ClassificationReport from_json(const nlohmann::json& j);
};

// Frames a closed segment into lines and writes each line, in segment order,
// to exactly one store in `out_dir`: `<talker><sentence>.txt`,
// `P_<vendor>.txt` or `quarantine.txt`. Also writes index.csv (one row per
// line: number, offset, store, checksum, quarantine reason) and report.json.
// Lines are re-terminated with CRLF. Throws IoError on unreadable input or
// unwritable output; report.json is written last.
ClassificationReport route(const std::filesystem::path& segment, const std::filesystem::path& out_dir,
                           const RouteOptions& options = {});

// Reads a classification output directory back into segment-ordered lines.
struct ClassifiedSegment {
  ClassificationReport report;
  std::vector<ClassifiedLine> lines;
};
ClassifiedSegment read_classified(const std::filesystem::path& dir);

}  // namespace loranrec
