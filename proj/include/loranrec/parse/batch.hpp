#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "loranrec/classify/router.hpp"
#include "loranrec/parse/sentences.hpp"

namespace loranrec {

struct ParseErrorEntry {
  std::uint64_t line_number = 0;
  std::string store;
  std::string reason;
};

struct ParsedBatch {
  std::vector<GpsFix> gps;
  std::vector<LoranMeasurement> loran;
  std::vector<ParseErrorEntry> errors;
  std::uint64_t quarantined = 0;
  std::uint64_t unparsed = 0;  // recognised classes with no registered parser (GSV, GSA, ...)
  std::uint64_t date_sentences = 0;
};

// Maps message classes to parsers. Standard sentences are keyed by sentence
// code ("GGA", any talker); proprietary ones by store name ("P_LRM"). A real
// receiver grammar is added by registering one more entry.
class ParserRegistry {
 public:
  using GpsParser = std::function<GpsFix(std::span<const std::string_view>, DateContext&)>;
  using LoranParser = std::function<LoranMeasurement(std::span<const std::string_view>, DateContext&)>;
  using DateParser = std::function<DateUpdate(std::span<const std::string_view>, const MessageClass&)>;

  // GGA -> GpsFix, RMC/ZDA -> date context, P_LRM -> LoranMeasurement.
  static ParserRegistry defaults();

  void add_gps(std::string key, GpsParser parser) { entries_[std::move(key)] = Entry{std::move(parser), {}, {}}; }
  void add_loran(std::string key, LoranParser parser) { entries_[std::move(key)] = Entry{{}, std::move(parser), {}}; }
  void add_date(std::string key, DateParser parser) { entries_[std::move(key)] = Entry{{}, {}, std::move(parser)}; }

  struct Entry {
    GpsParser gps;
    LoranParser loran;
    DateParser date;
  };
  const Entry* find(const MessageClass& cls) const;

 private:
  std::map<std::string, Entry> entries_;
};

struct ParseOptions {
  // Anchor used when the segment has no usable date sentence (segment open time).
  std::optional<UtcInstant> reference_time;
  // Last resort when neither a date sentence nor a reference time exists.
  std::optional<Date> start_date;
  std::function<void(std::uint64_t)> on_line;
};

// Parses a segment's lines in order, threading one DateContext. Never aborts:
// each line yields a record, a date update, a counted parse error, or is
// counted as quarantined/unparsed. The context is seeded from the first date
// sentence, else from the reference time, else from the start date.
ParsedBatch parse_segment(std::span<const ClassifiedLine> lines, const ParseOptions& options = {},
                          const ParserRegistry& registry = ParserRegistry::defaults());

// line_number,store,reason
void write_parse_errors(const std::filesystem::path& path, std::span<const ParseErrorEntry> errors);

}  // namespace loranrec
