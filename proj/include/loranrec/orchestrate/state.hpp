#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "loranrec/time.hpp"

namespace loranrec {

enum class Stage { kRecorded = 0, kClassified = 1, kConverted = 2 };

std::string to_string(Stage s);
Stage stage_from_string(std::string_view s);

struct SegmentEntry {
  std::string session_id;
  std::string segment;  // file name inside the session directory
  std::optional<UtcInstant> open_time;
  Stage stage = Stage::kRecorded;
  bool flagged = false;
  std::string flag_reason;

  bool operator==(const SegmentEntry&) const = default;
};

struct PipelineState {
  std::vector<std::string> sessions;
  std::vector<SegmentEntry> segments;

  nlohmann::ordered_json to_json() const;
  // Throws ConfigError on malformed content.
  static PipelineState from_json(const nlohmann::json& j);
};

inline constexpr std::string_view kStateFile = "state.json";

// Sole owner of state.json. Every mutation is persisted (atomic replace)
// before the call returns, so the file always reflects the last completed
// transition. Thread-safe.
class StateStore {
 public:
  // Loads an existing state file or starts empty. Throws ConfigError when the
  // file exists but is corrupt.
  explicit StateStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }
  PipelineState snapshot() const;

  void add_session(const std::string& session_id);
  // No-op when the segment is already tracked.
  void add_segment(const SegmentEntry& entry);
  // Stages only move forward; a backwards or repeated transition throws.
  void advance(const std::string& session_id, const std::string& segment, Stage stage);
  void flag(const std::string& session_id, const std::string& segment, const std::string& reason);
  void clear_flag(const std::string& session_id, const std::string& segment);

 private:
  SegmentEntry& find(const std::string& session_id, const std::string& segment);
  void save() const;

  std::filesystem::path root_;
  mutable std::mutex mu_;
  PipelineState state_;
};

}  // namespace loranrec
