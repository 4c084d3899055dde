#include "loranrec/orchestrate/config.hpp"

#include "loranrec/error.hpp"
#include "loranrec/fs_util.hpp"

namespace loranrec {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::unique_ptr<Clock> make_clock(const ClockConfig& config) {
  if (config.mode == ClockConfig::Mode::kAccelerated) {
    return std::make_unique<AcceleratedClock>(config.start, config.factor);
  }
  return std::make_unique<SystemClock>();
}

ordered_json PipelineConfig::to_json() const {
  ordered_json j;
  j["source"] = source.to_string();
  if (source.replay_speed) j["replay_speed"] = *source.replay_speed;
  j["out_dir"] = out_dir.string();
  j["rotation"] = rotation.to_string();
  j["flush_interval"] = format_duration(flush_interval);
  j["retry"] = {{"max_attempts", retry.max_attempts},
                {"initial_backoff", format_duration(retry.initial_backoff)},
                {"max_backoff", format_duration(retry.max_backoff)}};
  j["format"] = to_string(format);
  j["quarantine_invalid_checksums"] = quarantine_invalid_checksums;
  j["gap_threshold"] = format_duration(gap_threshold);
  j["max_workers"] = max_workers;
  j["exit_on_eof"] = exit_on_eof;
  j["start_date"] = start_date ? ordered_json(format_date(*start_date)) : ordered_json(nullptr);
  if (clock.mode == ClockConfig::Mode::kAccelerated) {
    j["clock"] = {{"mode", "accelerated"}, {"start", format_iso8601(clock.start)}, {"factor", clock.factor}};
  } else {
    j["clock"] = {{"mode", "system"}};
  }
  return j;
}

PipelineConfig PipelineConfig::from_json(const json& j, const fs::path& base_dir) {
  PipelineConfig c;
  try {
    std::optional<double> speed;
    if (j.contains("replay_speed")) speed = j["replay_speed"].get<double>();
    c.source = SourceEndpoint::parse(j.at("source").get<std::string>(), speed);
    c.out_dir = j.at("out_dir").get<std::string>();
    if (c.out_dir.is_relative() && !base_dir.empty()) c.out_dir = base_dir / c.out_dir;
    if (j.contains("rotation")) c.rotation = RotationPolicy::parse(j["rotation"].get<std::string>());
    if (j.contains("flush_interval")) c.flush_interval = parse_duration(j["flush_interval"].get<std::string>());
    if (j.contains("retry")) {
      const auto& r = j["retry"];
      if (r.contains("max_attempts")) c.retry.max_attempts = r["max_attempts"].get<int>();
      if (r.contains("initial_backoff")) c.retry.initial_backoff = parse_duration(r["initial_backoff"].get<std::string>());
      if (r.contains("max_backoff")) c.retry.max_backoff = parse_duration(r["max_backoff"].get<std::string>());
    }
    if (j.contains("format")) c.format = export_format_from_string(j["format"].get<std::string>());
    if (j.contains("quarantine_invalid_checksums")) {
      c.quarantine_invalid_checksums = j["quarantine_invalid_checksums"].get<bool>();
    }
    if (j.contains("gap_threshold")) c.gap_threshold = parse_duration(j["gap_threshold"].get<std::string>());
    if (j.contains("max_workers")) c.max_workers = j["max_workers"].get<std::size_t>();
    if (j.contains("exit_on_eof")) c.exit_on_eof = j["exit_on_eof"].get<bool>();
    if (j.contains("start_date") && !j["start_date"].is_null()) {
      c.start_date = try_parse_date(j["start_date"].get<std::string>());
      if (!c.start_date) throw ConfigError("start_date must be YYYY-MM-DD");
    }
    if (j.contains("clock")) {
      const auto& k = j["clock"];
      const auto mode = k.at("mode").get<std::string>();
      if (mode == "accelerated") {
        c.clock.mode = ClockConfig::Mode::kAccelerated;
        c.clock.start = parse_iso8601(k.at("start").get<std::string>());
        c.clock.factor = k.at("factor").get<double>();
      } else if (mode != "system") {
        throw ConfigError("clock mode must be system or accelerated");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed pipeline config: ") + e.what());
  }
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const fs::path& file) {
  try {
    return from_json(json::parse(read_file(file)), file.parent_path());
  } catch (const json::exception& e) {
    throw ConfigError("malformed config '" + file.string() + "': " + e.what());
  }
}

void PipelineConfig::validate() const {
  source.validate();
  rotation.validate();
  if (out_dir.empty()) throw ConfigError("out_dir is required");
  if (flush_interval <= Millis::zero()) throw ConfigError("flush_interval must be positive");
  if (max_workers == 0) throw ConfigError("max_workers must be at least 1");
  if (clock.mode == ClockConfig::Mode::kAccelerated && !(clock.factor > 0)) {
    throw ConfigError("clock factor must be positive");
  }
}

}  // namespace loranrec
