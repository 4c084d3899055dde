#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "loranrec/parse/records.hpp"
#include "loranrec/time.hpp"

namespace loranrec {

// Piecewise-linear value over seconds since scenario start, held constant
// outside the first and last knots.
class LinearProfile {
 public:
  LinearProfile() = default;
  explicit LinearProfile(double constant) : knots_{{0.0, constant}} {}
  explicit LinearProfile(std::vector<std::pair<double, double>> knots);

  double at(double seconds) const;
  double min() const;
  double max() const;
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  // A number or [[t, v], ...].
  static LinearProfile from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

 private:
  std::vector<std::pair<double, double>> knots_;
};

struct StationScenario {
  StationId station{9930, StationRole::kM};
  double rate_hz = 0.1;
  LinearProfile toa_us{20000.0};
  LinearProfile snr_db{12.0};
  LinearProfile ecd_us{0.0};
};

struct CorruptionRates {
  double bad_checksum = 0;
  double garbage_line = 0;
  double truncation = 0;
};

// Defaults are placeholders: the real receiver's cadence and sentence mix are
// not known.
struct Scenario {
  std::uint64_t seed = 1;
  UtcInstant start = make_instant(Date{std::chrono::year{2020}, std::chrono::April, std::chrono::day{17}}, Millis{0});
  Millis duration{60'000};
  double gps_rate_hz = 1.0;
  Millis zda_interval{60'000};  // zero disables ZDA
  std::vector<StationScenario> stations;
  double base_lat = 45.0;
  double base_lon = 15.0;
  double base_alt_m = 120.0;
  double noise_sigma_m = 2.0;
  int fix_quality = 1;
  int num_sats = 9;
  double hdop = 0.9;
  CorruptionRates corruption;

  // Throws ConfigError.
  void validate() const;
  static Scenario from_json(const nlohmann::json& j);
  static Scenario load(const std::filesystem::path& file);
  nlohmann::ordered_json to_json() const;
};

}  // namespace loranrec
