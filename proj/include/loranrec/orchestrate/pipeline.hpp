#pragma once

#include <atomic>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <vector>

#include "loranrec/clock.hpp"
#include "loranrec/error.hpp"
#include "loranrec/orchestrate/config.hpp"
#include "loranrec/orchestrate/state.hpp"
#include "loranrec/record/source.hpp"

namespace loranrec {

enum class FaultPoint { kMidCapture, kPostRotation, kMidClassify, kMidParse, kMidConvert };

// Test seams. `fault` fires at every injection point (per chunk while
// capturing, per line while classifying and parsing, per file while
// exporting, once after each rotation). `before_convert` runs between parsing
// and export; throwing from it simulates a failing converter.
struct PipelineHooks {
  std::function<void(FaultPoint, const SegmentEntry&)> fault;
  std::function<void(const SegmentEntry&)> before_convert;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

inline constexpr std::string_view kPipelineConfigFile = "pipeline.json";

// Where the stages of one segment write: <root>/processed/<session>/<segment stem>/.
std::filesystem::path segment_work_dir(const std::filesystem::path& root, const SegmentEntry& entry);
std::filesystem::path classified_dir(const std::filesystem::path& root, const SegmentEntry& entry);
std::filesystem::path export_dir(const std::filesystem::path& root, const SegmentEntry& entry);

// Advances one segment from its recorded stage to converted. A stage that did
// not complete is redone from scratch, so reruns are byte-identical.
void process_segment(const PipelineConfig& config, StateStore& store, const SegmentEntry& entry,
                     const PipelineHooks& hooks = {});

// Unattended capture with rotation; every closed segment is classified,
// parsed and exported on a worker while capture continues.
class Pipeline {
 public:
  Pipeline(PipelineConfig config, const Clock& clock, PipelineHooks hooks = {});

  // Opens the configured source with retries. Returns an exit code.
  int run(std::stop_token stop = {});
  // Uses an already opened source; `reopen` reconnects after a drop.
  int run(std::unique_ptr<ByteSource> source, SourceOpener reopen, std::stop_token stop = {});

  std::uint64_t captured_bytes() const { return captured_.load(std::memory_order_relaxed); }
  std::optional<std::string> session_id() const;

 private:
  PipelineConfig config_;
  const Clock* clock_;
  PipelineHooks hooks_;
  std::atomic<std::uint64_t> captured_{0};
  mutable std::mutex mu_;
  std::optional<std::string> session_id_;
};

struct RecoveryResult {
  PipelineState state;
  std::size_t reprocessed = 0;
  std::size_t flagged = 0;
  std::size_t finalized_active = 0;
};

// Thrown when state.json is unreadable; the message lists the raw segments
// found on disk that could be recovered by hand.
class RecoveryError : public Error {
 public:
  RecoveryError(const std::string& what, std::vector<std::filesystem::path> recoverable)
      : Error(what), recoverable_(std::move(recoverable)) {}
  const std::vector<std::filesystem::path>& recoverable() const { return recoverable_; }

 private:
  std::vector<std::filesystem::path> recoverable_;
};

// Brings a crashed pipeline directory back to a consistent state: segments
// left active by the crash are finalised, closed segments missing from the
// state are registered, and every segment short of `converted` is processed
// from its last completed stage. Uses <state_dir>/pipeline.json when
// `config` is not given.
RecoveryResult recover(const std::filesystem::path& state_dir, std::optional<PipelineConfig> config = std::nullopt,
                       const PipelineHooks& hooks = {});

}  // namespace loranrec
