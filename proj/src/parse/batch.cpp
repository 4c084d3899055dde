#include "loranrec/parse/batch.hpp"

#include <fstream>

#include "loranrec/error.hpp"

namespace loranrec {

ParserRegistry ParserRegistry::defaults() {
  ParserRegistry r;
  r.add_gps("GGA", [](std::span<const std::string_view> f, DateContext& ctx) { return parse_gga(f, ctx); });
  r.add_date("RMC", parse_date_sentence);
  r.add_date("ZDA", parse_date_sentence);
  r.add_loran("P_LRM", [](std::span<const std::string_view> f, DateContext& ctx) { return parse_loran(f, ctx); });
  return r;
}

const ParserRegistry::Entry* ParserRegistry::find(const MessageClass& cls) const {
  std::string key;
  if (cls.kind == MessageKind::kNmeaStandard) {
    key = cls.sentence;
  } else if (cls.kind == MessageKind::kNmeaProprietary) {
    key = cls.store_name();
  } else {
    return nullptr;
  }
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

bool usable(const ClassifiedLine& line) {
  return line.quarantine == QuarantineReason::kNone && line.checksum != ChecksumStatus::kInvalid;
}

std::optional<UtcInstant> first_date_anchor(std::span<const ClassifiedLine> lines, const ParserRegistry& registry,
                                            DateSource& source) {
  for (const auto& line : lines) {
    if (!usable(line)) continue;
    const auto* entry = registry.find(line.cls);
    if (entry == nullptr || !entry->date) continue;
    try {
      const auto fields = split_fields(line.raw);
      const DateUpdate u = entry->date(fields, line.cls);
      source = u.source;
      return make_instant(u.date, u.tod.value_or(Millis::zero()));
    } catch (const ParseError&) {
    }
  }
  return std::nullopt;
}

}  // namespace

ParsedBatch parse_segment(std::span<const ClassifiedLine> lines, const ParseOptions& options,
                          const ParserRegistry& registry) {
  ParsedBatch batch;
  DateSource anchor_source = DateSource::kConfiguredStartDate;
  std::optional<UtcInstant> anchor = first_date_anchor(lines, registry, anchor_source);
  if (!anchor && options.reference_time) anchor = options.reference_time;
  if (!anchor && options.start_date) anchor = make_instant(*options.start_date, std::chrono::hours(12));

  std::optional<DateContext> ctx;
  for (const auto& line : lines) {
    if (options.on_line) options.on_line(line.line_number);
    if (line.quarantine != QuarantineReason::kNone) {
      ++batch.quarantined;
      continue;
    }
    if (line.checksum == ChecksumStatus::kInvalid) {
      batch.errors.push_back({line.line_number, line.store, "invalid checksum"});
      continue;
    }
    const auto* entry = registry.find(line.cls);
    if (entry == nullptr) {
      ++batch.unparsed;
      continue;
    }
    try {
      const auto fields = split_fields(line.raw);
      if (entry->date) {
        apply_date_update(ctx, entry->date(fields, line.cls));
        ++batch.date_sentences;
        continue;
      }
      if (!ctx) {
        if (fields.size() < 2) throw ParseError("time", "missing");
        if (!anchor) throw ParseError("date", "no date context for time-of-day record");
        ctx = seed_context(*anchor, parse_time_of_day(fields[1]), anchor_source);
      }
      if (entry->gps) {
        GpsFix fix = entry->gps(fields, *ctx);
        fix.source_line = line.line_number;
        batch.gps.push_back(fix);
      } else if (entry->loran) {
        LoranMeasurement m = entry->loran(fields, *ctx);
        m.source_line = line.line_number;
        batch.loran.push_back(m);
      }
    } catch (const ParseError& e) {
      batch.errors.push_back({line.line_number, line.store, e.what()});
    }
  }
  return batch;
}

void write_parse_errors(const std::filesystem::path& path, std::span<const ParseErrorEntry> errors) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create '" + path.string() + "'");
  out << "line_number,store,reason\n";
  for (const auto& e : errors) {
    std::string reason = e.reason;
    for (char& c : reason) {
      if (c == ',' || c == '\n' || c == '\r') c = ';';
    }
    out << e.line_number << ',' << e.store << ',' << reason << '\n';
  }
  if (!out) throw IoError("writing '" + path.string() + "' failed");
}

}  // namespace loranrec
