#pragma once

#include <functional>
#include <memory>
#include <stop_token>

#include "loranrec/clock.hpp"
#include "loranrec/record/recorder.hpp"
#include "loranrec/record/source.hpp"

namespace loranrec {

struct CaptureConfig {
  RetryPolicy retry;
  // End the loop at source EOF instead of reconnecting (file replay, tests).
  bool stop_at_eof = false;
  Millis poll_interval{100};
  std::size_t read_buffer_bytes = 64 * 1024;
};

struct CaptureHooks {
  // Called on the capture thread right after a segment is closed by rotation.
  std::function<void(const RawSegment&)> on_segment_closed;
  // Called after each chunk has been handed to the recorder.
  std::function<void(std::string_view chunk)> on_chunk;
};

enum class CaptureEnd { kEof, kStopped };

// The capture loop: read, rotate between chunks once a boundary has passed (at
// the first chunk that ends a line, within a small bound), append verbatim.
// On a dropped link it reconnects through `reopen` with backoff and records
// the outage as a gap; exhausting the retries throws SourceError.
// The active segment is left open for the caller to close.
CaptureEnd run_capture(std::unique_ptr<ByteSource> source, const SourceOpener& reopen, Recorder& recorder,
                       const Clock& clock, const CaptureConfig& config, const CaptureHooks& hooks,
                       std::stop_token stop = {});

}  // namespace loranrec
