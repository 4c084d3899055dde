#include "loranrec/convert/export.hpp"

#include <charconv>
#include <fstream>

#include "loranrec/digest.hpp"
#include "loranrec/error.hpp"
#include "loranrec/fs_util.hpp"
#include "loranrec/log.hpp"

namespace loranrec {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(ExportFormat f) { return f == ExportFormat::kColumns ? "columns" : "lines"; }

ExportFormat export_format_from_string(std::string_view s) {
  if (s == "columns") return ExportFormat::kColumns;
  if (s == "lines") return ExportFormat::kLines;
  throw ConfigError("unknown export format '" + std::string(s) + "' (expected columns or lines)");
}

std::string_view extension(ExportFormat f) { return f == ExportFormat::kColumns ? ".csv" : ".jsonl"; }

namespace {

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string opt_num(const std::optional<double>& v, ExportFormat f) {
  if (v) return num(*v);
  return f == ExportFormat::kColumns ? "" : "null";
}

struct Column {
  std::string_view name;
  std::string value;
  bool quoted = false;  // JSON string
};

std::string gps_null(ExportFormat f) { return f == ExportFormat::kColumns ? "" : "null"; }

std::vector<Column> gps_columns(const GpsFix& g, ExportFormat f) {
  return {{"lat_deg", opt_num(g.lat, f)},
          {"lon_deg", opt_num(g.lon, f)},
          {"alt_m", opt_num(g.alt_m, f)},
          {"fix_quality", std::to_string(g.fix_quality)},
          {"num_sats", std::to_string(g.num_sats)},
          {"hdop", opt_num(g.hdop, f)}};
}

std::vector<Column> loran_columns(const LoranMeasurement& m) {
  return {{"gri", std::to_string(m.gri)},
          {"station_role", std::string(1, to_char(m.station_role)), true},
          {"toa_us", num(m.toa_us)},
          {"snr_db", num(m.snr_db)},
          {"ecd_us", num(m.ecd_us)}};
}

void append_row(std::string& out, const std::vector<Column>& cols, ExportFormat f) {
  if (f == ExportFormat::kColumns) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) out += ',';
      out += cols[i].value;
    }
    out += '\n';
    return;
  }
  out += '{';
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ',';
    out += '"';
    out += cols[i].name;
    out += "\":";
    if (cols[i].quoted && cols[i].value != "null") {
      out += '"' + cols[i].value + '"';
    } else {
      out += cols[i].value;
    }
  }
  out += "}\n";
}

std::vector<Column> with_prefix(std::vector<Column> prefix, std::vector<Column> rest) {
  prefix.insert(prefix.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
  return prefix;
}

void header(std::string& out, std::string_view columns, ExportFormat f) {
  if (f == ExportFormat::kColumns) {
    out += columns;
    out += '\n';
  }
}

}  // namespace

std::string render_gps(std::span<const TimelineRecord> timeline, ExportFormat format) {
  std::string out;
  header(out, kGpsColumns, format);
  for (const auto& r : timeline) {
    if (!r.is_gps()) continue;
    append_row(out, with_prefix({{"timestamp", format_iso8601(r.timestamp), true}}, gps_columns(r.gps(), format)),
               format);
  }
  return out;
}

std::string render_loran(std::span<const TimelineRecord> timeline, ExportFormat format) {
  std::string out;
  header(out, kLoranColumns, format);
  for (const auto& r : timeline) {
    if (r.is_gps()) continue;
    append_row(out, with_prefix({{"timestamp", format_iso8601(r.timestamp), true}}, loran_columns(r.loran())), format);
  }
  return out;
}

std::string render_all(std::span<const TimelineRecord> timeline, ExportFormat format) {
  std::string out;
  header(out, kAllColumns, format);
  const std::string null = gps_null(format);
  for (const auto& r : timeline) {
    std::vector<Column> cols{{"timestamp", format_iso8601(r.timestamp), true},
                             {"record_type", r.is_gps() ? "gps" : "loran", true}};
    std::vector<Column> gps_part = r.is_gps() ? gps_columns(r.gps(), format)
                                              : std::vector<Column>{{"lat_deg", null}, {"lon_deg", null},
                                                                    {"alt_m", null}, {"fix_quality", null},
                                                                    {"num_sats", null}, {"hdop", null}};
    std::vector<Column> loran_part = r.is_gps() ? std::vector<Column>{{"gri", null}, {"station_role", null, true},
                                                                      {"toa_us", null}, {"snr_db", null},
                                                                      {"ecd_us", null}}
                                                : loran_columns(r.loran());
    append_row(out, with_prefix(with_prefix(std::move(cols), std::move(gps_part)), std::move(loran_part)), format);
  }
  return out;
}

std::uint64_t SessionManifest::loran_total() const {
  std::uint64_t n = 0;
  for (const auto& [station, count] : loran) n += count;
  return n;
}

ordered_json SessionManifest::to_json() const {
  ordered_json j;
  j["session_id"] = session_id;
  j["segment"] = segment;
  j["time_span"] = time_span ? ordered_json{format_iso8601(time_span->start), format_iso8601(time_span->end)}
                             : ordered_json(nullptr);
  ordered_json counts;
  counts["gps_fix"] = gps_fix;
  counts["loran"] = loran;
  counts["parse_errors"] = parse_errors;
  counts["quarantined"] = quarantined;
  counts["unparsed"] = unparsed;
  j["record_counts"] = counts;
  j["export_files"] = ordered_json::array();
  for (const auto& f : export_files) {
    j["export_files"].push_back(
        {{"path", f.path}, {"format", to_string(f.format)}, {"digest", f.digest}, {"records", f.records}});
  }
  j["gap_threshold"] = format_duration(gap_threshold);
  j["gap_list"] = ordered_json::array();
  for (const auto& g : gap_list) j["gap_list"].push_back({format_iso8601(g.start), format_iso8601(g.end)});
  return j;
}

SessionManifest SessionManifest::from_json(const json& j) {
  SessionManifest m;
  try {
    m.session_id = j.at("session_id").get<std::string>();
    m.segment = j.at("segment").get<std::string>();
    if (!j.at("time_span").is_null()) {
      m.time_span = Interval{parse_iso8601(j["time_span"][0].get<std::string>()),
                             parse_iso8601(j["time_span"][1].get<std::string>())};
    }
    const auto& counts = j.at("record_counts");
    m.gps_fix = counts.at("gps_fix").get<std::uint64_t>();
    m.loran = counts.at("loran").get<std::map<std::string, std::uint64_t>>();
    m.parse_errors = counts.at("parse_errors").get<std::uint64_t>();
    m.quarantined = counts.at("quarantined").get<std::uint64_t>();
    m.unparsed = counts.value("unparsed", std::uint64_t{0});
    for (const auto& f : j.at("export_files")) {
      m.export_files.push_back({f.at("path").get<std::string>(), export_format_from_string(f.at("format").get<std::string>()),
                                f.at("digest").get<std::string>(), f.at("records").get<std::uint64_t>()});
    }
    m.gap_threshold = parse_duration(j.at("gap_threshold").get<std::string>());
    for (const auto& g : j.at("gap_list")) {
      m.gap_list.push_back({parse_iso8601(g[0].get<std::string>()), parse_iso8601(g[1].get<std::string>())});
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

SessionManifest SessionManifest::load(const fs::path& dir) {
  try {
    return from_json(json::parse(read_file(dir / kManifestFile)));
  } catch (const json::exception& e) {
    throw IoError("malformed manifest in '" + dir.string() + "': " + e.what());
  }
}

std::vector<std::string> SessionManifest::verify(const fs::path& dir) const {
  std::vector<std::string> bad;
  for (const auto& f : export_files) {
    try {
      if (sha256_file(dir / f.path) != f.digest) bad.push_back(f.path);
    } catch (const IoError&) {
      bad.push_back(f.path);
    }
  }
  return bad;
}

SessionManifest export_timeline(std::span<const TimelineRecord> timeline, const fs::path& out_dir,
                                const ExportOptions& options) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());

  SessionManifest manifest;
  manifest.session_id = options.session_id;
  manifest.segment = options.segment;
  manifest.parse_errors = options.parse_errors;
  manifest.quarantined = options.quarantined;
  manifest.unparsed = options.unparsed;
  manifest.gap_threshold = options.gap_threshold;
  for (const auto& r : timeline) {
    if (r.is_gps()) {
      ++manifest.gps_fix;
    } else {
      ++manifest.loran[r.loran().station().to_string()];
    }
  }
  const TimelineSummary summary = summarize(timeline, options.gap_threshold);
  manifest.time_span = summary.span;
  manifest.gap_list = summary.gaps;

  const std::string ext(extension(options.format));
  struct Pending {
    std::string name;
    std::string text;
    std::uint64_t records;
  };
  const std::uint64_t loran_count = manifest.loran_total();
  const Pending files[] = {
      {"timeline_gps" + ext, render_gps(timeline, options.format), manifest.gps_fix},
      {"timeline_loran" + ext, render_loran(timeline, options.format), loran_count},
      {"timeline_all" + ext, render_all(timeline, options.format), manifest.gps_fix + loran_count},
  };

  std::vector<fs::path> written;
  try {
    for (const auto& f : files) {
      written.push_back(out_dir / f.name);
      write_file_atomic(out_dir / f.name, f.text);
      manifest.export_files.push_back({f.name, options.format, sha256_hex(f.text), f.records});
      if (options.on_file_written) options.on_file_written(f.name);
    }
    written.push_back(out_dir / kManifestFile);
    write_file_atomic(out_dir / kManifestFile, manifest.to_json().dump(2) + "\n");
  } catch (...) {
    for (const auto& p : written) {
      fs::remove(p, ec);
      auto tmp = p;
      tmp += ".tmp";
      fs::remove(tmp, ec);
    }
    throw;
  }
  return manifest;
}

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

double to_double(std::string_view s) {
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw IoError("malformed number '" + std::string(s) + "'");
  return v;
}

int to_int(std::string_view s) {
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw IoError("malformed integer '" + std::string(s) + "'");
  return v;
}

std::optional<double> opt_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return to_double(s);
}

std::optional<double> opt_double(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    fn(text.substr(start, end - start));
    start = end + 1;
  }
}

StationRole role_of(std::string_view s) {
  const auto role = s.size() == 1 ? station_role_from_char(s[0]) : std::nullopt;
  if (!role) throw IoError("malformed station role '" + std::string(s) + "'");
  return *role;
}

}  // namespace

std::vector<GpsFix> import_gps(std::string_view text, ExportFormat format) {
  std::vector<GpsFix> out;
  bool first = true;
  for_each_line(text, [&](std::string_view line) {
    if (format == ExportFormat::kColumns) {
      if (std::exchange(first, false)) {
        if (line != kGpsColumns) throw IoError("unexpected GPS header");
        return;
      }
      const auto c = split_csv(line);
      if (c.size() != 7) throw IoError("GPS row has " + std::to_string(c.size()) + " columns");
      GpsFix g;
      g.timestamp = parse_iso8601(c[0]);
      g.lat = opt_double(c[1]);
      g.lon = opt_double(c[2]);
      g.alt_m = opt_double(c[3]);
      g.fix_quality = to_int(c[4]);
      g.num_sats = to_int(c[5]);
      g.hdop = opt_double(c[6]);
      out.push_back(g);
    } else {
      const json j = json::parse(line);
      GpsFix g;
      g.timestamp = parse_iso8601(j.at("timestamp").get<std::string>());
      g.lat = opt_double(j.at("lat_deg"));
      g.lon = opt_double(j.at("lon_deg"));
      g.alt_m = opt_double(j.at("alt_m"));
      g.fix_quality = j.at("fix_quality").get<int>();
      g.num_sats = j.at("num_sats").get<int>();
      g.hdop = opt_double(j.at("hdop"));
      out.push_back(g);
    }
  });
  return out;
}

std::vector<LoranMeasurement> import_loran(std::string_view text, ExportFormat format) {
  std::vector<LoranMeasurement> out;
  bool first = true;
  for_each_line(text, [&](std::string_view line) {
    LoranMeasurement m;
    if (format == ExportFormat::kColumns) {
      if (std::exchange(first, false)) {
        if (line != kLoranColumns) throw IoError("unexpected Loran header");
        return;
      }
      const auto c = split_csv(line);
      if (c.size() != 6) throw IoError("Loran row has " + std::to_string(c.size()) + " columns");
      m.timestamp = parse_iso8601(c[0]);
      m.gri = to_int(c[1]);
      m.station_role = role_of(c[2]);
      m.toa_us = to_double(c[3]);
      m.snr_db = to_double(c[4]);
      m.ecd_us = to_double(c[5]);
    } else {
      const json j = json::parse(line);
      m.timestamp = parse_iso8601(j.at("timestamp").get<std::string>());
      m.gri = j.at("gri").get<int>();
      m.station_role = role_of(j.at("station_role").get<std::string>());
      m.toa_us = j.at("toa_us").get<double>();
      m.snr_db = j.at("snr_db").get<double>();
      m.ecd_us = j.at("ecd_us").get<double>();
    }
    out.push_back(m);
  });
  return out;
}

ImportedTimeline import_timeline(const fs::path& dir, ExportFormat format) {
  const std::string ext(extension(format));
  try {
    return {import_gps(read_file(dir / ("timeline_gps" + ext)), format),
            import_loran(read_file(dir / ("timeline_loran" + ext)), format)};
  } catch (const json::exception& e) {
    throw IoError("malformed export in '" + dir.string() + "': " + e.what());
  }
}

}  // namespace loranrec
