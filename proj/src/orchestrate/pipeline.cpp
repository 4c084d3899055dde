#include "loranrec/orchestrate/pipeline.hpp"

#include <semaphore>
#include <thread>

#include "loranrec/classify/router.hpp"
#include "loranrec/convert/export.hpp"
#include "loranrec/convert/timeline.hpp"
#include "loranrec/digest.hpp"
#include "loranrec/error.hpp"
#include "loranrec/fs_util.hpp"
#include "loranrec/log.hpp"
#include "loranrec/parse/batch.hpp"
#include "loranrec/record/capture.hpp"
#include "loranrec/record/recorder.hpp"

namespace loranrec {

namespace fs = std::filesystem;

fs::path segment_work_dir(const fs::path& root, const SegmentEntry& entry) {
  return root / "processed" / entry.session_id / fs::path(entry.segment).stem();
}

fs::path classified_dir(const fs::path& root, const SegmentEntry& entry) {
  return segment_work_dir(root, entry) / "classified";
}

fs::path export_dir(const fs::path& root, const SegmentEntry& entry) { return segment_work_dir(root, entry) / "export"; }

void process_segment(const PipelineConfig& config, StateStore& store, const SegmentEntry& entry,
                     const PipelineHooks& hooks) {
  const fs::path root = store.root();
  const fs::path segment_path = root / entry.session_id / entry.segment;
  auto fault = [&](FaultPoint p) {
    if (hooks.fault) hooks.fault(p, entry);
  };

  Stage stage = entry.stage;
  if (stage == Stage::kRecorded) {
    const auto out = classified_dir(root, entry);
    fs::remove_all(out);
    RouteOptions opts;
    opts.quarantine_invalid_checksums = config.quarantine_invalid_checksums;
    opts.on_line = [&](std::uint64_t) { fault(FaultPoint::kMidClassify); };
    const auto report = route(segment_path, out, opts);
    store.advance(entry.session_id, entry.segment, Stage::kClassified);
    stage = Stage::kClassified;
    log::info("segment_classified", {{"segment", entry.segment},
                                     {"lines", std::to_string(report.total_lines)},
                                     {"quarantined", std::to_string(report.quarantined_lines)}});
  }
  if (stage == Stage::kClassified) {
    const auto out = export_dir(root, entry);
    fs::remove_all(out);
    const auto classified = read_classified(classified_dir(root, entry));
    ParseOptions popts;
    popts.reference_time = entry.open_time ? entry.open_time : classified.report.segment_open_time;
    popts.start_date = config.start_date;
    popts.on_line = [&](std::uint64_t) { fault(FaultPoint::kMidParse); };
    const ParsedBatch batch = parse_segment(classified.lines, popts);
    if (hooks.before_convert) hooks.before_convert(entry);
    const auto timeline = merge_sort(batch.gps, batch.loran);
    fs::create_directories(out);
    write_parse_errors(out / kParseErrorsFile, batch.errors);
    ExportOptions eopts;
    eopts.format = config.format;
    eopts.session_id = entry.session_id;
    eopts.segment = entry.segment;
    eopts.parse_errors = batch.errors.size();
    eopts.quarantined = batch.quarantined;
    eopts.unparsed = batch.unparsed;
    eopts.gap_threshold = config.gap_threshold;
    eopts.on_file_written = [&](std::string_view) { fault(FaultPoint::kMidConvert); };
    const auto manifest = export_timeline(timeline, out, eopts);
    store.advance(entry.session_id, entry.segment, Stage::kConverted);
    store.clear_flag(entry.session_id, entry.segment);
    log::info("segment_converted", {{"segment", entry.segment},
                                    {"gps", std::to_string(manifest.gps_fix)},
                                    {"loran", std::to_string(manifest.loran_total())},
                                    {"parse_errors", std::to_string(manifest.parse_errors)}});
  }
}

namespace {

// Bounded pool: one thread per closed segment, at most `limit` running.
class SegmentWorkers {
 public:
  explicit SegmentWorkers(std::size_t limit) : slots_(static_cast<std::ptrdiff_t>(limit)) {}
  ~SegmentWorkers() { wait(); }

  void submit(std::function<void()> job) {
    threads_.emplace_back([this, job = std::move(job)] {
      slots_.acquire();
      job();
      slots_.release();
    });
  }

  void wait() {
    for (auto& t : threads_) {
      if (t.joinable()) t.join();
    }
    threads_.clear();
  }

 private:
  std::counting_semaphore<1024> slots_;
  std::vector<std::jthread> threads_;
};

void process_isolated(const PipelineConfig& config, StateStore& store, const SegmentEntry& entry,
                      const PipelineHooks& hooks) {
  try {
    process_segment(config, store, entry, hooks);
  } catch (const std::exception& e) {
    log::error("segment_processing_failed", {{"segment", entry.segment}, {"reason", e.what()}});
    try {
      store.flag(entry.session_id, entry.segment, e.what());
    } catch (const std::exception& inner) {
      log::error("state_update_failed", {{"segment", entry.segment}, {"reason", inner.what()}});
    }
  }
}

SegmentEntry entry_for(const RawSegment& seg) {
  SegmentEntry e;
  e.session_id = seg.session_id;
  e.segment = seg.path.filename().string();
  e.open_time = seg.open_time;
  return e;
}

std::size_t count_flagged(const PipelineState& st, const std::string& session_id) {
  std::size_t n = 0;
  for (const auto& s : st.segments) {
    if (s.session_id == session_id && s.flagged) ++n;
  }
  return n;
}

}  // namespace

Pipeline::Pipeline(PipelineConfig config, const Clock& clock, PipelineHooks hooks)
    : config_(std::move(config)), clock_(&clock), hooks_(std::move(hooks)) {
  config_.validate();
}

std::optional<std::string> Pipeline::session_id() const {
  std::lock_guard lock(mu_);
  return session_id_;
}

int Pipeline::run(std::stop_token stop) {
  const SourceEndpoint endpoint = config_.source;
  SourceOpener opener = [endpoint] { return open_source(endpoint); };
  std::unique_ptr<ByteSource> source;
  try {
    source = open_with_retry(opener, config_.retry, [&] { return stop.stop_requested(); });
  } catch (const SourceError& e) {
    log::error("source_unreachable", {{"source", endpoint.to_string()}, {"reason", e.what()}});
    return kExitFatal;
  }
  return run(std::move(source), std::move(opener), stop);
}

int Pipeline::run(std::unique_ptr<ByteSource> source, SourceOpener reopen, std::stop_token stop) {
  std::optional<StateStore> store;
  std::optional<Recorder> recorder;
  try {
    store.emplace(config_.out_dir);
    write_file_atomic(config_.out_dir / kPipelineConfigFile, config_.to_json().dump(2) + "\n");
    RecordOptions ropts;
    ropts.rotation = config_.rotation;
    ropts.flush_interval = config_.flush_interval;
    recorder.emplace(Recorder::open_session(source->describe(), config_.out_dir, ropts, *clock_));
    store->add_session(recorder->session_id());
  } catch (const Error& e) {
    log::error("pipeline_startup_failed", {{"reason", e.what()}});
    return kExitFatal;
  }
  {
    std::lock_guard lock(mu_);
    session_id_ = recorder->session_id();
  }

  SegmentWorkers workers(config_.max_workers);
  auto dispatch = [&](const RawSegment& seg) {
    const SegmentEntry entry = entry_for(seg);
    store->add_segment(entry);
    if (hooks_.fault) hooks_.fault(FaultPoint::kPostRotation, entry);
    workers.submit([this, &store, entry] { process_isolated(config_, *store, entry, hooks_); });
  };

  CaptureHooks chooks;
  chooks.on_segment_closed = dispatch;
  chooks.on_chunk = [&](std::string_view chunk) {
    captured_.fetch_add(chunk.size(), std::memory_order_relaxed);
    if (hooks_.fault) hooks_.fault(FaultPoint::kMidCapture, entry_for(recorder->active_segment()));
  };
  CaptureConfig cconf;
  cconf.retry = config_.retry;
  cconf.stop_at_eof = config_.exit_on_eof;

  bool fatal = false;
  try {
    const auto end = run_capture(std::move(source), reopen, *recorder, *clock_, cconf, chooks, stop);
    log::info("capture_finished", {{"reason", end == CaptureEnd::kEof ? "eof" : "stopped"}});
  } catch (const Error& e) {
    log::error("capture_failed", {{"session", recorder->session_id()}, {"reason", e.what()}});
    fatal = true;
  }
  try {
    dispatch(recorder->close());
  } catch (const Error& e) {
    log::error("final_segment_failed", {{"session", recorder->session_id()}, {"reason", e.what()}});
    fatal = true;
  }
  workers.wait();
  if (fatal) return kExitFatal;
  return count_flagged(store->snapshot(), recorder->session_id()) > 0 ? kExitPartial : kExitOk;
}

namespace {

std::vector<fs::path> scan_raw_segments(const fs::path& root) {
  std::vector<fs::path> found;
  std::error_code ec;
  for (const auto& dir : fs::directory_iterator(root, ec)) {
    if (!dir.is_directory() || !fs::exists(dir.path() / kSessionFile)) continue;
    for (const auto& f : fs::directory_iterator(dir.path(), ec)) {
      if (f.path().extension() == ".log" && f.path().filename().string().rfind("raw_", 0) == 0) {
        found.push_back(f.path());
      }
    }
  }
  std::sort(found.begin(), found.end());
  return found;
}

// Finalises segments a crash left active and registers every closed segment.
std::size_t reconcile_session(StateStore& store, const std::string& session_id) {
  const fs::path session_dir = store.root() / session_id;
  SessionMetadata meta;
  try {
    meta = SessionMetadata::load(session_dir);
  } catch (const Error& e) {
    log::error("session_metadata_unreadable", {{"session", session_id}, {"reason", e.what()}});
    return 0;
  }
  std::size_t finalized = 0;
  for (auto& seg : meta.segments) {
    if (seg.status != SegmentStatus::kActive && seg.status != SegmentStatus::kDigestPending) continue;
    std::error_code ec;
    if (!fs::exists(seg.path)) continue;
    seg.byte_count = fs::file_size(seg.path, ec);
    seg.digest = sha256_file(seg.path);
    if (seg.status == SegmentStatus::kActive) {
      seg.status = SegmentStatus::kRecovered;
      ++finalized;
    } else {
      seg.status = SegmentStatus::kClosed;
    }
  }
  if (finalized > 0 || !meta.segments.empty()) meta.save(session_dir);
  for (const auto& seg : meta.segments) {
    if (!fs::exists(seg.path)) continue;
    SegmentEntry e;
    e.session_id = session_id;
    e.segment = seg.path.filename().string();
    e.open_time = seg.open_time;
    store.add_segment(e);
  }
  return finalized;
}

}  // namespace

RecoveryResult recover(const fs::path& state_dir, std::optional<PipelineConfig> config, const PipelineHooks& hooks) {
  if (!fs::exists(state_dir / kStateFile)) {
    throw RecoveryError("no state file in '" + state_dir.string() + "'", scan_raw_segments(state_dir));
  }
  std::optional<StateStore> store;
  try {
    store.emplace(state_dir);
  } catch (const ConfigError& e) {
    const auto recoverable = scan_raw_segments(state_dir);
    std::string msg = std::string(e.what()) + "; refusing to resume. Recoverable raw segments:";
    for (const auto& p : recoverable) msg += "\n  " + p.string();
    throw RecoveryError(msg, recoverable);
  }
  if (!config) {
    config = PipelineConfig::load(state_dir / kPipelineConfigFile);
  }
  config->out_dir = state_dir;

  RecoveryResult result;
  for (const auto& session : store->snapshot().sessions) result.finalized_active += reconcile_session(*store, session);

  for (const auto& entry : store->snapshot().segments) {
    if (entry.stage == Stage::kConverted) continue;
    ++result.reprocessed;
    log::info("segment_recovering", {{"segment", entry.segment}, {"from_stage", to_string(entry.stage)}});
    process_isolated(*config, *store, entry, hooks);
  }
  result.state = store->snapshot();
  for (const auto& s : result.state.segments) {
    if (s.flagged) ++result.flagged;
  }
  return result;
}

}  // namespace loranrec
