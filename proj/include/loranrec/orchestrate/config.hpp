#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "loranrec/clock.hpp"
#include "loranrec/convert/export.hpp"
#include "loranrec/orchestrate/rotation.hpp"
#include "loranrec/record/endpoint.hpp"
#include "loranrec/record/source.hpp"

namespace loranrec {

struct ClockConfig {
  enum class Mode { kSystem, kAccelerated } mode = Mode::kSystem;
  UtcInstant start{};
  double factor = 1.0;
};

std::unique_ptr<Clock> make_clock(const ClockConfig& config);

// Everything `run` needs; loaded from a JSON config file.
struct PipelineConfig {
  SourceEndpoint source;
  std::filesystem::path out_dir;
  RotationPolicy rotation;
  Millis flush_interval{1000};
  RetryPolicy retry{0, Millis(200), Millis(30000)};
  ExportFormat format = ExportFormat::kColumns;
  bool quarantine_invalid_checksums = true;
  Millis gap_threshold = kDefaultGapThreshold;
  std::size_t max_workers = 2;
  bool exit_on_eof = false;
  std::optional<Date> start_date;
  ClockConfig clock;

  nlohmann::ordered_json to_json() const;
  // Relative out_dir values resolve against `base_dir`.
  static PipelineConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static PipelineConfig load(const std::filesystem::path& file);
  void validate() const;
};

}  // namespace loranrec
