#include "loranrec/record/recorder.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <thread>

#include "loranrec/digest.hpp"
#include "loranrec/error.hpp"
#include "loranrec/fs_util.hpp"
#include "loranrec/log.hpp"

namespace loranrec {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(SegmentStatus s) {
  switch (s) {
    case SegmentStatus::kActive: return "active";
    case SegmentStatus::kClosed: return "closed";
    case SegmentStatus::kDigestPending: return "digest-pending";
    case SegmentStatus::kRecovered: return "recovered";
  }
  return "active";
}

SegmentStatus segment_status_from_string(std::string_view s) {
  if (s == "active") return SegmentStatus::kActive;
  if (s == "closed") return SegmentStatus::kClosed;
  if (s == "digest-pending") return SegmentStatus::kDigestPending;
  if (s == "recovered") return SegmentStatus::kRecovered;
  throw ConfigError("unknown segment status '" + std::string(s) + "'");
}

std::string segment_file_name(UtcInstant open_time) { return "raw_" + format_iso8601_basic(open_time) + ".log"; }

std::optional<UtcInstant> segment_open_time_from_name(const fs::path& path) {
  const std::string stem = path.stem().string();
  if (stem.rfind("raw_", 0) != 0) return std::nullopt;
  // raw_YYYYMMDDTHHMMSSZ[_n]
  return try_parse_iso8601(std::string_view(stem).substr(4, 16));
}

ordered_json SessionMetadata::to_json() const {
  ordered_json j;
  j["session_id"] = session_id;
  j["source"] = source;
  j["rotation"] = rotation.to_string();
  j["flush_interval"] = format_duration(flush_interval);
  j["start_time"] = format_iso8601(start_time);
  j["segments"] = ordered_json::array();
  for (const auto& s : segments) {
    ordered_json e;
    e["path"] = s.path.filename().string();
    e["open_time"] = format_iso8601(s.open_time);
    e["close_time"] = s.close_time ? ordered_json(format_iso8601(*s.close_time)) : ordered_json(nullptr);
    e["byte_count"] = s.byte_count;
    e["digest"] = s.digest;
    e["status"] = to_string(s.status);
    j["segments"].push_back(std::move(e));
  }
  j["gaps"] = ordered_json::array();
  for (const auto& g : gaps) {
    j["gaps"].push_back({{"start", format_iso8601(g.span.start)},
                         {"end", format_iso8601(g.span.end)},
                         {"reason", g.reason}});
  }
  return j;
}

SessionMetadata SessionMetadata::from_json(const json& j) {
  SessionMetadata m;
  try {
    m.session_id = j.at("session_id").get<std::string>();
    m.source = j.at("source").get<std::string>();
    m.rotation = RotationPolicy::parse(j.at("rotation").get<std::string>());
    m.flush_interval = parse_duration(j.at("flush_interval").get<std::string>());
    m.start_time = parse_iso8601(j.at("start_time").get<std::string>());
    for (const auto& e : j.at("segments")) {
      RawSegment s;
      s.path = e.at("path").get<std::string>();
      s.session_id = m.session_id;
      s.open_time = parse_iso8601(e.at("open_time").get<std::string>());
      if (!e.at("close_time").is_null()) s.close_time = parse_iso8601(e.at("close_time").get<std::string>());
      s.byte_count = e.at("byte_count").get<std::uint64_t>();
      s.digest = e.at("digest").get<std::string>();
      s.status = segment_status_from_string(e.at("status").get<std::string>());
      m.segments.push_back(std::move(s));
    }
    for (const auto& g : j.at("gaps")) {
      m.gaps.push_back({{parse_iso8601(g.at("start").get<std::string>()), parse_iso8601(g.at("end").get<std::string>())},
                        g.at("reason").get<std::string>()});
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed session metadata: ") + e.what());
  }
  return m;
}

SessionMetadata SessionMetadata::load(const fs::path& session_dir) {
  json j;
  try {
    j = json::parse(read_file(session_dir / kSessionFile));
  } catch (const json::exception& e) {
    throw ConfigError("malformed " + (session_dir / kSessionFile).string() + ": " + e.what());
  }
  auto m = from_json(j);
  for (auto& s : m.segments) s.path = session_dir / s.path;
  return m;
}

void SessionMetadata::save(const fs::path& session_dir) const {
  write_file_atomic(session_dir / kSessionFile, to_json().dump(2) + "\n");
}

Recorder::Recorder(const Clock& clock, RecordOptions options)
    : clock_(&clock), options_(std::move(options)), total_bytes_(std::make_unique<std::atomic<std::uint64_t>>(0)) {}

Recorder::Recorder(Recorder&& other) noexcept
    : clock_(other.clock_),
      options_(std::move(other.options_)),
      session_dir_(std::move(other.session_dir_)),
      meta_(std::move(other.meta_)),
      active_(std::move(other.active_)),
      fd_(std::exchange(other.fd_, -1)),
      pending_(std::move(other.pending_)),
      last_flush_(other.last_flush_),
      next_boundary_(other.next_boundary_),
      total_bytes_(std::move(other.total_bytes_)) {}

Recorder::~Recorder() {
  if (fd_ >= 0) {
    try {
      close();
    } catch (const std::exception& e) {
      log::error("segment_close_failed", {{"path", active_.path.string()}, {"reason", e.what()}});
    }
  }
}

Recorder Recorder::open_session(std::string source_description, const fs::path& out_dir,
                                const RecordOptions& options, const Clock& clock) {
  options.rotation.validate();
  if (options.flush_interval <= Millis::zero()) throw ConfigError("flush interval must be positive");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw IoError("output directory '" + out_dir.string() + "' is not usable");

  Recorder r(clock, options);
  const UtcInstant start = clock.now();
  std::string id = format_iso8601_basic(start);
  fs::path dir = out_dir / id;
  for (int n = 2; fs::exists(dir); ++n) {
    id = format_iso8601_basic(start) + "_" + std::to_string(n);
    dir = out_dir / id;
  }
  if (!fs::create_directory(dir, ec) || ec) throw IoError("cannot create session directory '" + dir.string() + "'");
  r.session_dir_ = dir;
  r.meta_.session_id = id;
  r.meta_.source = std::move(source_description);
  r.meta_.rotation = options.rotation;
  r.meta_.flush_interval = options.flush_interval;
  r.meta_.start_time = start;
  r.open_segment(start);
  log::info("session_opened", {{"session", id}, {"source", r.meta_.source}, {"rotation", options.rotation.to_string()}});
  return r;
}

void Recorder::open_segment(UtcInstant open_time) {
  fs::path path = session_dir_ / segment_file_name(open_time);
  for (int n = 1; fs::exists(path); ++n) {
    path = session_dir_ / ("raw_" + format_iso8601_basic(open_time) + "_" + std::to_string(n) + ".log");
  }
  fd_ = ::open(path.c_str(), O_WRONLY | O_CREAT | O_EXCL | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) throw IoError("cannot create segment '" + path.string() + "': " + std::strerror(errno));
  active_ = RawSegment{path, meta_.session_id, open_time, std::nullopt, 0, "", SegmentStatus::kActive};
  last_flush_ = clock_->now();
  next_boundary_ = loranrec::next_boundary(open_time, options_.rotation, meta_.start_time);
  meta_.segments.push_back(active_);
  save_metadata();
}

void Recorder::save_metadata() {
  meta_.segments.back() = active_;
  meta_.save(session_dir_);
}

void Recorder::write_all(std::string_view bytes) {
  int failures = 0;
  std::size_t done = 0;
  while (done < bytes.size()) {
    const ssize_t n = ::write(fd_, bytes.data() + done, bytes.size() - done);
    if (n >= 0) {
      done += static_cast<std::size_t>(n);
      continue;
    }
    if (errno == EINTR) continue;
    const int err = errno;
    if (++failures > options_.write_retries) {
      throw IoError("write to '" + active_.path.string() + "' failed: " + std::strerror(err));
    }
    log::warn("segment_write_retry", {{"path", active_.path.string()}, {"reason", std::strerror(err)}});
    std::this_thread::sleep_for(Millis(50 * failures));
  }
}

void Recorder::capture(std::string_view chunk) {
  if (fd_ < 0) throw IoError("capture on a closed session");
  pending_.append(chunk);
  active_.byte_count += chunk.size();
  total_bytes_->fetch_add(chunk.size(), std::memory_order_relaxed);
  if (pending_.size() >= options_.max_buffered_bytes || clock_->now() - last_flush_ >= options_.flush_interval) {
    flush();
  }
}

void Recorder::tick() {
  if (fd_ >= 0 && clock_->now() - last_flush_ >= options_.flush_interval) flush();
}

void Recorder::flush() {
  if (fd_ < 0) return;
  if (!pending_.empty()) {
    write_all(pending_);
    pending_.clear();
    if (options_.sync_to_disk) ::fdatasync(fd_);
  }
  last_flush_ = clock_->now();
}

RawSegment Recorder::finish_segment(UtcInstant close_time) {
  flush();
  if (options_.sync_to_disk) ::fsync(fd_);
  ::close(fd_);
  fd_ = -1;
  active_.close_time = std::max(close_time, active_.open_time);
  std::error_code ec;
  const auto on_disk = fs::file_size(active_.path, ec);
  if (ec || on_disk != active_.byte_count) {
    log::error("segment_size_mismatch", {{"path", active_.path.string()},
                                         {"expected", std::to_string(active_.byte_count)},
                                         {"on_disk", ec ? ec.message() : std::to_string(on_disk)}});
  }
  try {
    active_.digest = sha256_file(active_.path);
    active_.status = SegmentStatus::kClosed;
  } catch (const std::exception& e) {
    active_.status = SegmentStatus::kDigestPending;
    log::error("segment_digest_failed", {{"path", active_.path.string()}, {"reason", e.what()}});
  }
  try {
    save_metadata();
  } catch (const std::exception& e) {
    active_.status = SegmentStatus::kDigestPending;
    meta_.segments.back() = active_;
    log::error("session_metadata_write_failed", {{"session", meta_.session_id}, {"reason", e.what()}});
  }
  log::info("segment_closed", {{"path", active_.path.string()},
                               {"bytes", std::to_string(active_.byte_count)},
                               {"status", to_string(active_.status)}});
  return active_;
}

RawSegment Recorder::rotate(UtcInstant now) {
  if (fd_ < 0) throw IoError("rotate on a closed session");
  UtcInstant boundary = now;
  if (now >= next_boundary_) {
    boundary = next_boundary_;
    for (auto b = loranrec::next_boundary(boundary, options_.rotation, meta_.start_time); b <= now;
         b = loranrec::next_boundary(b, options_.rotation, meta_.start_time)) {
      boundary = b;
    }
  }
  RawSegment closed = finish_segment(boundary);
  open_segment(boundary);
  return closed;
}

RawSegment Recorder::close() {
  if (fd_ < 0) return active_;
  return finish_segment(clock_->now());
}

void Recorder::abandon() {
  pending_.clear();
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

void Recorder::record_gap(SourceGap gap) {
  meta_.gaps.push_back(std::move(gap));
  try {
    save_metadata();
  } catch (const std::exception& e) {
    log::error("session_metadata_write_failed", {{"session", meta_.session_id}, {"reason", e.what()}});
  }
}

}  // namespace loranrec
