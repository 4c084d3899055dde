#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "loranrec/clock.hpp"
#include "loranrec/orchestrate/rotation.hpp"
#include "loranrec/record/source.hpp"
#include "loranrec/time.hpp"

namespace loranrec {

enum class SegmentStatus { kActive, kClosed, kDigestPending, kRecovered };

std::string to_string(SegmentStatus s);
SegmentStatus segment_status_from_string(std::string_view s);

struct RawSegment {
  std::filesystem::path path;
  std::string session_id;
  UtcInstant open_time;
  std::optional<UtcInstant> close_time;
  std::uint64_t byte_count = 0;
  std::string digest;  // empty while active or digest-pending
  SegmentStatus status = SegmentStatus::kActive;
};

struct SourceGap {
  Interval span;
  std::string reason;
};

// Contents of `<session_dir>/session.json`.
struct SessionMetadata {
  std::string session_id;
  std::string source;
  RotationPolicy rotation;
  Millis flush_interval{1000};
  UtcInstant start_time;
  std::vector<RawSegment> segments;  // paths stored relative to the session dir
  std::vector<SourceGap> gaps;

  nlohmann::ordered_json to_json() const;
  static SessionMetadata from_json(const nlohmann::json& j);
  static SessionMetadata load(const std::filesystem::path& session_dir);
  void save(const std::filesystem::path& session_dir) const;
};

inline constexpr std::string_view kSessionFile = "session.json";

struct RecordOptions {
  RotationPolicy rotation;
  Millis flush_interval{1000};
  // Buffered bytes that force a flush regardless of the interval.
  std::size_t max_buffered_bytes = 1 << 20;
  bool sync_to_disk = true;
  int write_retries = 3;
};

// Single-writer capture into rotating raw segment files. Owns the
// CaptureState: one active segment at any time, bytes buffered since the last
// flush, and the time of that flush. Bytes are never decoded or split.
class Recorder {
 public:
  // Creates `<out_dir>/<session_id>/` with session.json and an empty active
  // segment. Throws IoError when out_dir is not writable.
  static Recorder open_session(std::string source_description, const std::filesystem::path& out_dir,
                               const RecordOptions& options, const Clock& clock);

  Recorder(Recorder&&) noexcept;
  Recorder& operator=(Recorder&&) = delete;
  ~Recorder();

  // Appends verbatim. Flushes when flush_interval has elapsed since the last
  // flush or the buffer is full.
  void capture(std::string_view chunk);
  // Flush if the interval elapsed; called by the capture loop on idle reads.
  void tick();
  void flush();

  bool rotation_due(UtcInstant now) const { return now >= next_boundary_; }
  UtcInstant next_boundary() const { return next_boundary_; }

  // Closes the active segment and opens an empty one. When `now` is at or past
  // the scheduled boundary the segments meet at the latest crossed boundary;
  // otherwise the rotation is forced at `now`.
  RawSegment rotate(UtcInstant now);
  // Final close without opening a new segment.
  RawSegment close();
  // Simulated crash: drops unflushed bytes and releases the file without flushing.
  void abandon();

  void record_gap(SourceGap gap);

  const RawSegment& active_segment() const { return active_; }
  const std::string& session_id() const { return meta_.session_id; }
  const std::filesystem::path& session_dir() const { return session_dir_; }
  const SessionMetadata& metadata() const { return meta_; }
  // Total bytes accepted across all segments; safe to read from other threads.
  std::uint64_t total_bytes() const { return total_bytes_->load(std::memory_order_relaxed); }
  std::uint64_t bytes_since_flush() const { return pending_.size(); }
  UtcInstant last_flush_time() const { return last_flush_; }
  bool is_open() const { return fd_ >= 0; }

 private:
  Recorder(const Clock& clock, RecordOptions options);
  void open_segment(UtcInstant open_time);
  RawSegment finish_segment(UtcInstant close_time);
  void write_all(std::string_view bytes);
  void save_metadata();

  const Clock* clock_;
  RecordOptions options_;
  std::filesystem::path session_dir_;
  SessionMetadata meta_;
  RawSegment active_;
  int fd_ = -1;
  std::string pending_;
  UtcInstant last_flush_;
  UtcInstant next_boundary_;
  std::unique_ptr<std::atomic<std::uint64_t>> total_bytes_;
};

// Session ids and segment names derive from UTC instants in basic ISO 8601.
std::string segment_file_name(UtcInstant open_time);
std::optional<UtcInstant> segment_open_time_from_name(const std::filesystem::path& path);

}  // namespace loranrec
