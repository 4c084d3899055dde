#include "loranrec/classify/router.hpp"

#include <charconv>
#include <fstream>

#include "loranrec/classify/framing.hpp"
#include "loranrec/digest.hpp"
#include "loranrec/error.hpp"
#include "loranrec/fs_util.hpp"
#include "loranrec/record/recorder.hpp"

namespace loranrec {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(QuarantineReason r) {
  switch (r) {
    case QuarantineReason::kNone: return "";
    case QuarantineReason::kUnknownClass: return "unknown";
    case QuarantineReason::kInvalidChecksum: return "invalid_checksum";
    case QuarantineReason::kOversized: return "oversized";
  }
  return "";
}

namespace {

QuarantineReason quarantine_reason_from_string(std::string_view s) {
  if (s.empty()) return QuarantineReason::kNone;
  if (s == "unknown") return QuarantineReason::kUnknownClass;
  if (s == "invalid_checksum") return QuarantineReason::kInvalidChecksum;
  if (s == "oversized") return QuarantineReason::kOversized;
  throw IoError("unknown quarantine reason '" + std::string(s) + "'");
}

std::uint64_t to_u64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) throw IoError("malformed index number '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void clear_previous_outputs(const fs::path& out_dir) {
  for (const auto& entry : fs::directory_iterator(out_dir)) {
    const auto name = entry.path().filename().string();
    if (entry.path().extension() == ".txt" || name == kIndexFile || name == kReportFile) fs::remove(entry.path());
  }
}

class StoreWriter {
 public:
  explicit StoreWriter(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& store, std::string_view line) {
    auto it = files_.find(store);
    if (it == files_.end()) {
      const auto path = dir_ / (store + ".txt");
      it = files_.emplace(store, std::ofstream(path, std::ios::binary | std::ios::trunc)).first;
      if (!it->second) throw IoError("cannot create '" + path.string() + "'");
    }
    it->second.write(line.data(), static_cast<std::streamsize>(line.size()));
    it->second.write("\r\n", 2);
    if (!it->second) throw IoError("write failed for store '" + store + "'");
  }

  void close() {
    for (auto& [store, f] : files_) {
      f.close();
      if (!f) throw IoError("closing store '" + store + "' failed");
    }
  }

 private:
  fs::path dir_;
  std::map<std::string, std::ofstream> files_;
};

}  // namespace

ordered_json ClassificationReport::to_json() const {
  ordered_json j;
  j["segment"] = segment;
  j["segment_open_time"] = segment_open_time ? ordered_json(format_iso8601(*segment_open_time)) : ordered_json(nullptr);
  j["segment_digest"] = segment_digest;
  j["total_lines"] = total_lines;
  j["quarantined_lines"] = quarantined_lines;
  j["trailing_unterminated"] = trailing_unterminated;
  j["quarantine_invalid_checksums"] = quarantine_invalid_checksums;
  j["counts"] = counts;
  j["output_paths"] = output_paths;
  j["quarantine_reasons"] = quarantine_reasons;
  j["checksum"] = checksum_counts;
  return j;
}

ClassificationReport ClassificationReport::from_json(const json& j) {
  ClassificationReport r;
  try {
    r.segment = j.at("segment").get<std::string>();
    if (!j.at("segment_open_time").is_null()) {
      r.segment_open_time = parse_iso8601(j.at("segment_open_time").get<std::string>());
    }
    r.segment_digest = j.at("segment_digest").get<std::string>();
    r.total_lines = j.at("total_lines").get<std::uint64_t>();
    r.quarantined_lines = j.at("quarantined_lines").get<std::uint64_t>();
    r.trailing_unterminated = j.at("trailing_unterminated").get<bool>();
    r.quarantine_invalid_checksums = j.at("quarantine_invalid_checksums").get<bool>();
    r.counts = j.at("counts").get<std::map<std::string, std::uint64_t>>();
    r.output_paths = j.at("output_paths").get<std::map<std::string, std::string>>();
    r.quarantine_reasons = j.at("quarantine_reasons").get<std::map<std::string, std::uint64_t>>();
    r.checksum_counts = j.at("checksum").get<std::map<std::string, std::uint64_t>>();
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed classification report: ") + e.what());
  }
  return r;
}

ClassificationReport route(const fs::path& segment, const fs::path& out_dir, const RouteOptions& options) {
  std::ifstream in(segment, std::ios::binary);
  if (!in) throw IoError("cannot read segment '" + segment.string() + "'");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  clear_previous_outputs(out_dir);

  ClassificationReport report;
  report.segment = segment.filename().string();
  report.segment_open_time = segment_open_time_from_name(segment);
  report.quarantine_invalid_checksums = options.quarantine_invalid_checksums;

  StoreWriter stores(out_dir);
  std::ofstream index(out_dir / kIndexFile, std::ios::binary | std::ios::trunc);
  if (!index) throw IoError("cannot create index in '" + out_dir.string() + "'");
  index << "line_number,segment_offset,store,checksum,quarantine_reason\n";

  Sha256 digest;
  LineFramer framer;
  const LineFramer::Sink sink = [&](std::string_view line, std::uint64_t offset) {
    const std::uint64_t line_number = ++report.total_lines;
    auto reason = QuarantineReason::kNone;
    ChecksumStatus checksum = ChecksumStatus::kAbsent;
    std::string store;
    if (line.size() > options.max_line_bytes) {
      reason = QuarantineReason::kOversized;
    } else {
      const MessageClass cls = classify_line(line);
      checksum = verify_checksum(line);
      if (cls.kind == MessageKind::kUnknown) {
        reason = QuarantineReason::kUnknownClass;
      } else if (checksum == ChecksumStatus::kInvalid && options.quarantine_invalid_checksums) {
        reason = QuarantineReason::kInvalidChecksum;
      } else {
        store = cls.store_name();
      }
    }
    if (reason != QuarantineReason::kNone) {
      store = std::string(kQuarantineStore);
      ++report.quarantined_lines;
      ++report.quarantine_reasons[to_string(reason)];
    }
    ++report.counts[store];
    ++report.checksum_counts[to_string(checksum)];
    report.output_paths.emplace(store, store + ".txt");
    stores.write(store, line);
    index << line_number << ',' << offset << ',' << store << ',' << to_string(checksum) << ','
          << to_string(reason) << '\n';
    if (options.on_line) options.on_line(line_number);
  };

  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const std::string_view chunk(buf.data(), static_cast<std::size_t>(in.gcount()));
    digest.update(chunk);
    framer.feed(chunk, sink);
  }
  if (in.bad()) throw IoError("read error on segment '" + segment.string() + "'");
  report.trailing_unterminated = framer.finish(sink);
  report.segment_digest = digest.finish_hex();

  stores.close();
  index.close();
  if (!index) throw IoError("writing index in '" + out_dir.string() + "' failed");
  write_file_atomic(out_dir / kReportFile, report.to_json().dump(2) + "\n");
  return report;
}

ClassifiedSegment read_classified(const fs::path& dir) {
  ClassifiedSegment out;
  try {
    out.report = ClassificationReport::from_json(json::parse(read_file(dir / kReportFile)));
  } catch (const json::exception& e) {
    throw IoError("malformed report in '" + dir.string() + "': " + e.what());
  }

  std::map<std::string, std::vector<std::string>> stores;
  for (const auto& [store, file] : out.report.output_paths) {
    auto framed = extract_lines(read_file(dir / file), {});
    if (!framed.residual.empty()) throw IoError("store '" + file + "' ends with an unterminated line");
    stores.emplace(store, std::move(framed.lines));
  }
  std::map<std::string, std::size_t> cursor;

  const std::string index = read_file(dir / kIndexFile);
  const auto rows = extract_lines(index, {});
  out.lines.reserve(rows.lines.size());
  for (std::size_t i = 1; i < rows.lines.size(); ++i) {
    const auto cols = split(rows.lines[i], ',');
    if (cols.size() != 5) throw IoError("malformed index row " + std::to_string(i));
    ClassifiedLine line;
    line.line_number = to_u64(cols[0]);
    line.segment_offset = to_u64(cols[1]);
    line.store = std::string(cols[2]);
    line.checksum = checksum_status_from_string(cols[3]);
    line.quarantine = quarantine_reason_from_string(cols[4]);
    auto it = stores.find(line.store);
    std::size_t& pos = cursor[line.store];
    if (it == stores.end() || pos >= it->second.size()) {
      throw IoError("index refers past the end of store '" + line.store + "'");
    }
    line.raw = std::move(it->second[pos++]);
    line.cls = line.quarantine == QuarantineReason::kOversized ? MessageClass::unknown() : classify_line(line.raw);
    out.lines.push_back(std::move(line));
  }
  if (out.lines.size() != out.report.total_lines) {
    throw IoError("index in '" + dir.string() + "' does not match the report line count");
  }
  return out;
}

}  // namespace loranrec
