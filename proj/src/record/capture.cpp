#include "loranrec/record/capture.hpp"

#include <vector>

#include "loranrec/error.hpp"
#include "loranrec/log.hpp"

namespace loranrec {
namespace {

// A due rotation waits for a chunk that ends a line so sentences do not
// straddle two segments, but never longer than these bounds.
constexpr std::size_t kMaxDeferredBytes = 8192;
constexpr Millis kMaxDeferral{60'000};

class Rotator {
 public:
  Rotator(Recorder& recorder, const Clock& clock, const CaptureHooks& hooks)
      : recorder_(recorder), clock_(clock), hooks_(hooks) {}

  void before_chunk(std::size_t size) {
    const UtcInstant now = clock_.now();
    if (!recorder_.rotation_due(now)) return;
    if (at_line_start_ || deferred_ >= kMaxDeferredBytes || now - recorder_.next_boundary() >= kMaxDeferral) {
      rotate(now);
      return;
    }
    deferred_ += size;
  }

  void after_chunk(std::string_view chunk) {
    if (!chunk.empty()) at_line_start_ = chunk.back() == '\n';
  }

  void idle() {
    const UtcInstant now = clock_.now();
    if (!recorder_.rotation_due(now)) return;
    if (at_line_start_ || now - recorder_.next_boundary() >= kMaxDeferral) rotate(now);
  }

 private:
  void rotate(UtcInstant now) {
    RawSegment closed = recorder_.rotate(now);
    at_line_start_ = true;
    deferred_ = 0;
    if (hooks_.on_segment_closed) hooks_.on_segment_closed(closed);
  }

  Recorder& recorder_;
  const Clock& clock_;
  const CaptureHooks& hooks_;
  bool at_line_start_ = true;
  std::size_t deferred_ = 0;
};

}  // namespace

CaptureEnd run_capture(std::unique_ptr<ByteSource> source, const SourceOpener& reopen, Recorder& recorder,
                       const Clock& clock, const CaptureConfig& config, const CaptureHooks& hooks,
                       std::stop_token stop) {
  std::vector<char> buffer(config.read_buffer_bytes);
  Rotator rotator(recorder, clock, hooks);
  while (!stop.stop_requested()) {
    const auto result = source->read(buffer, config.poll_interval);
    switch (result.status) {
      case ByteSource::Status::kData:
      {
        // the boundary always falls between chunks
        const std::string_view chunk(buffer.data(), result.size);
        rotator.before_chunk(chunk.size());
        recorder.capture(chunk);
        rotator.after_chunk(chunk);
        if (hooks.on_chunk) hooks.on_chunk(chunk);
        break;
      }
      case ByteSource::Status::kTimeout:
        rotator.idle();
        recorder.tick();
        break;
      case ByteSource::Status::kEof: {
        recorder.flush();
        if (config.stop_at_eof) return CaptureEnd::kEof;
        const UtcInstant lost_at = clock.now();
        log::warn("source_dropped", {{"source", source->describe()}});
        source.reset();
        if (!reopen) throw SourceError("source dropped and no reconnect configured");
        source = open_with_retry(reopen, config.retry, [&] { return stop.stop_requested(); });
        recorder.record_gap({{lost_at, clock.now()}, "source disconnected"});
        log::info("source_reconnected", {{"source", source->describe()}});
        break;
      }
    }
  }
  recorder.flush();
  return CaptureEnd::kStopped;
}

}  // namespace loranrec
