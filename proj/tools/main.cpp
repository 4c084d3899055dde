#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "loranrec/classify/router.hpp"
#include "loranrec/convert/export.hpp"
#include "loranrec/convert/stats.hpp"
#include "loranrec/convert/timeline.hpp"
#include "loranrec/error.hpp"
#include "loranrec/fs_util.hpp"
#include "loranrec/log.hpp"
#include "loranrec/orchestrate/config.hpp"
#include "loranrec/orchestrate/pipeline.hpp"
#include "loranrec/parse/batch.hpp"
#include "loranrec/record/capture.hpp"
#include "loranrec/record/recorder.hpp"
#include "loranrec/simulate/generator.hpp"
#include "loranrec/simulate/server.hpp"

namespace fs = std::filesystem;
using namespace loranrec;

namespace {

std::atomic<bool> g_signalled{false};

extern "C" void on_signal(int) { g_signalled.store(true); }

// Turns SIGINT/SIGTERM into a stop request for the running command.
class SignalStop {
 public:
  SignalStop() {
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    watcher_ = std::jthread([this](std::stop_token st) {
      while (!st.stop_requested()) {
        if (g_signalled.load()) {
          log::info("stop_requested");
          source_.request_stop();
          return;
        }
        std::this_thread::sleep_for(Millis(100));
      }
    });
  }
  std::stop_token token() const { return source_.get_token(); }

 private:
  std::stop_source source_;
  std::jthread watcher_;
};

int cmd_record(const std::string& source_text, const fs::path& out, const std::string& rotate,
               const std::string& flush, std::optional<double> replay_speed, bool exit_on_eof) {
  const auto endpoint = SourceEndpoint::parse(source_text, replay_speed);
  endpoint.validate();
  RecordOptions opts;
  opts.rotation = RotationPolicy::parse(rotate);
  opts.flush_interval = parse_duration(flush);
  SystemClock clock;
  SignalStop stop;
  CaptureConfig cconf;
  cconf.retry.max_attempts = 0;
  cconf.stop_at_eof = exit_on_eof;
  SourceOpener opener = [endpoint] { return open_source(endpoint); };
  auto source = open_with_retry(opener, cconf.retry, [&] { return stop.token().stop_requested(); });
  auto recorder = Recorder::open_session(source->describe(), out, opts, clock);
  CaptureHooks hooks;
  hooks.on_segment_closed = [](const RawSegment& s) { std::cout << s.path.string() << "\n" << std::flush; };
  run_capture(std::move(source), opener, recorder, clock, cconf, hooks, stop.token());
  std::cout << recorder.close().path.string() << "\n";
  return kExitOk;
}

int cmd_classify(const fs::path& segment, const fs::path& out, bool keep_invalid) {
  RouteOptions opts;
  opts.quarantine_invalid_checksums = !keep_invalid;
  const auto report = route(segment, out, opts);
  std::cout << report.to_json().dump(2) << "\n";
  return kExitOk;
}

int cmd_convert(const fs::path& classified, const fs::path& out, const std::string& format,
                const std::string& start_date, const std::string& gap_threshold, const std::string& session) {
  const auto input = read_classified(classified);
  ParseOptions popts;
  popts.reference_time = input.report.segment_open_time;
  if (!start_date.empty()) {
    popts.start_date = try_parse_date(start_date);
    if (!popts.start_date) throw ConfigError("start date must be YYYY-MM-DD");
  }
  const auto batch = parse_segment(input.lines, popts);
  const auto timeline = merge_sort(batch.gps, batch.loran);
  fs::create_directories(out);
  write_parse_errors(out / kParseErrorsFile, batch.errors);
  ExportOptions eopts;
  eopts.format = export_format_from_string(format);
  eopts.session_id = session;
  eopts.segment = input.report.segment;
  eopts.parse_errors = batch.errors.size();
  eopts.quarantined = batch.quarantined;
  eopts.unparsed = batch.unparsed;
  eopts.gap_threshold = parse_duration(gap_threshold);
  const auto manifest = export_timeline(timeline, out, eopts);
  std::cout << manifest.to_json().dump(2) << "\n";
  return kExitOk;
}

int cmd_run(const fs::path& config_file) {
  const auto config = PipelineConfig::load(config_file);
  const auto clock = make_clock(config.clock);
  SignalStop stop;
  Pipeline pipeline(config, *clock);
  return pipeline.run(stop.token());
}

int cmd_stats(const fs::path& session, const std::string& station, const std::string& gap_threshold,
              fs::path out) {
  const auto stats = collect_stats(session, parse_duration(gap_threshold));
  if (out.empty()) out = session / "stats";
  std::optional<StationId> only;
  if (!station.empty()) only = StationId::parse(station);
  for (const auto& p : write_stats(stats, out, only)) std::cerr << "wrote " << p.string() << "\n";
  std::cout << stats.summary.to_json().dump(2) << "\n";
  return kExitOk;
}

int cmd_recover(const fs::path& state_dir, bool no_capture) {
  RecoveryResult result;
  try {
    result = recover(state_dir);
  } catch (const RecoveryError& e) {
    std::cerr << e.what() << "\n";
    return kExitFatal;
  }
  std::cout << "reprocessed " << result.reprocessed << " segment(s), finalised " << result.finalized_active
            << " interrupted segment(s), " << result.flagged << " flagged\n";
  if (no_capture) return result.flagged > 0 ? kExitPartial : kExitOk;
  auto config = PipelineConfig::load(state_dir / kPipelineConfigFile);
  config.out_dir = state_dir;
  const auto clock = make_clock(config.clock);
  SignalStop stop;
  Pipeline pipeline(config, *clock);
  const int rc = pipeline.run(stop.token());
  return rc == kExitOk && result.flagged > 0 ? kExitPartial : rc;
}

int cmd_simulate_generate(const fs::path& scenario_file, const fs::path& out) {
  const auto scenario = Scenario::load(scenario_file);
  const auto stream = generate_stream(scenario);
  fs::create_directories(out);
  write_file_atomic(out / "stream.log", stream.bytes());
  write_ground_truth(stream.truth, out);
  nlohmann::ordered_json tally;
  tally["sentences"] = stream.truth.sentences;
  tally["gps"] = stream.truth.gps.size();
  tally["zda"] = stream.truth.zda;
  for (const auto& [id, n] : stream.truth.per_station) tally["loran"][id.to_string()] = n;
  tally["corrupted"] = {{"bad_checksum", stream.truth.corrupted.bad_checksum},
                        {"truncated", stream.truth.corrupted.truncated},
                        {"garbage", stream.truth.corrupted.garbage}};
  write_file_atomic(out / "truth.json", tally.dump(2) + "\n");
  std::cout << tally.dump(2) << "\n";
  return kExitOk;
}

int cmd_simulate_serve(const fs::path& scenario_file, const std::string& listen, const std::string& pace,
                       const fs::path& truth_dir) {
  const auto scenario = Scenario::load(scenario_file);
  auto stream = generate_stream(scenario);
  if (!truth_dir.empty()) write_ground_truth(stream.truth, truth_dir);
  StreamServer server(listen, std::move(stream.emissions), Pacing::parse(pace));
  std::cout << "listening on port " << server.port() << "\n" << std::flush;
  SignalStop stop;
  server.start();
  while (!server.finished() && !stop.token().stop_requested()) std::this_thread::sleep_for(Millis(100));
  server.stop();
  log::info("sim_done", {{"bytes_sent", std::to_string(server.bytes_sent())}});
  return server.finished() ? kExitOk : kExitFatal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loranrec: unattended capture and processing of GPS and Loran receiver output"};
  app.require_subcommand(1);

  std::string source, rotate = "utc-midnight", flush = "1s", format = "columns", start_date;
  std::string gap = format_duration(kDefaultGapThreshold), station, listen = "127.0.0.1:4001", pace = "realtime";
  std::string session_name;
  fs::path out, segment, classified, config, session, state, scenario, truth_dir;
  std::optional<double> replay_speed;
  bool exit_on_eof = false, keep_invalid = false, no_capture = false;

  auto* record = app.add_subcommand("record", "Capture raw receiver bytes into rotating segments");
  record->add_option("--source", source, "kind:address (serial:/dev/ttyUSB0, tcp:host:port, file:path)")->required();
  record->add_option("--out", out, "Output directory")->required();
  record->add_option("--rotate", rotate, "utc-midnight or a fixed interval such as 24h");
  record->add_option("--flush-interval", flush, "Durability flush interval");
  record->add_option("--replay-speed", replay_speed, "File replay speed multiplier (0 = unpaced)");
  record->add_flag("--exit-on-eof", exit_on_eof, "Stop at end of input instead of reconnecting");

  auto* classify = app.add_subcommand("classify", "Split a raw segment into per-message stores");
  classify->add_option("--segment", segment, "Raw segment file")->required()->check(CLI::ExistingFile);
  classify->add_option("--out", out, "Output directory")->required();
  classify->add_flag("--keep-invalid-checksums", keep_invalid, "Route bad-checksum lines to their class store");

  auto* convert = app.add_subcommand("convert", "Parse classified stores and export a merged timeline");
  convert->add_option("--classified", classified, "Directory written by classify")->required();
  convert->add_option("--out", out, "Output directory")->required();
  convert->add_option("--format", format, "columns or lines")->check(CLI::IsMember({"columns", "lines"}));
  convert->add_option("--start-date", start_date, "Date (YYYY-MM-DD) used when no date sentence is present");
  convert->add_option("--gap-threshold", gap, "Minimum silence reported as a gap");
  convert->add_option("--session", session_name, "Session id recorded in the manifest");

  auto* run = app.add_subcommand("run", "Unattended capture with processing of every closed segment");
  run->add_option("--config", config, "Pipeline configuration (JSON)")->required()->check(CLI::ExistingFile);

  auto* stats = app.add_subcommand("stats", "SNR and GPS fix series over every export below a directory");
  stats->add_option("--session", session, "Pipeline output or session directory")->required();
  stats->add_option("--station", station, "Only this station, e.g. 9930M");
  stats->add_option("--gap-threshold", gap, "Minimum silence reported as a gap");
  stats->add_option("--out", out, "Output directory (default <session>/stats)");

  auto* recover_cmd = app.add_subcommand("recover", "Finish interrupted work and resume capture");
  recover_cmd->add_option("--state", state, "Pipeline output directory holding state.json")->required();
  recover_cmd->add_flag("--no-capture", no_capture, "Only reprocess; do not resume capture");

  auto* simulate = app.add_subcommand("simulate", "Synthetic receiver streams");
  simulate->require_subcommand(1);
  auto* generate = simulate->add_subcommand("generate", "Write a stream and its ground truth to a directory");
  generate->add_option("--scenario", scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  generate->add_option("--out", out, "Output directory")->required();
  auto* serve = simulate->add_subcommand("serve", "Serve a stream over TCP");
  serve->add_option("--scenario", scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  serve->add_option("--listen", listen, "host:port (port 0 picks one)");
  serve->add_option("--pace", pace, "realtime, unpaced or accelerated:<factor>");
  serve->add_option("--truth", truth_dir, "Also write ground truth here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*record) return cmd_record(source, out, rotate, flush, replay_speed, exit_on_eof);
    if (*classify) return cmd_classify(segment, out, keep_invalid);
    if (*convert) return cmd_convert(classified, out, format, start_date, gap, session_name);
    if (*run) return cmd_run(config);
    if (*stats) return cmd_stats(session, station, gap, out);
    if (*recover_cmd) return cmd_recover(state, no_capture);
    if (*generate) return cmd_simulate_generate(scenario, out);
    if (*serve) return cmd_simulate_serve(scenario, listen, pace, truth_dir);
  } catch (const std::exception& e) {
    log::error("fatal", {{"reason", e.what()}});
    return kExitFatal;
  }
  return kExitFatal;
}
