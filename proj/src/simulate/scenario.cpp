#include "loranrec/simulate/scenario.hpp"

#include <algorithm>
#include <set>

#include "loranrec/error.hpp"
#include "loranrec/fs_util.hpp"

namespace loranrec {

LinearProfile::LinearProfile(std::vector<std::pair<double, double>> knots) : knots_(std::move(knots)) {
  if (knots_.empty()) throw ConfigError("profile needs at least one knot");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].first > knots_[i - 1].first)) throw ConfigError("profile knot times must increase");
  }
}

double LinearProfile::at(double seconds) const {
  if (knots_.empty()) return 0;
  if (seconds <= knots_.front().first) return knots_.front().second;
  if (seconds >= knots_.back().first) return knots_.back().second;
  const auto hi = std::upper_bound(knots_.begin(), knots_.end(), seconds,
                                   [](double s, const auto& k) { return s < k.first; });
  const auto lo = hi - 1;
  const double f = (seconds - lo->first) / (hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

double LinearProfile::min() const {
  double v = knots_.empty() ? 0 : knots_.front().second;
  for (const auto& k : knots_) v = std::min(v, k.second);
  return v;
}

double LinearProfile::max() const {
  double v = knots_.empty() ? 0 : knots_.front().second;
  for (const auto& k : knots_) v = std::max(v, k.second);
  return v;
}

LinearProfile LinearProfile::from_json(const nlohmann::json& j) {
  if (j.is_number()) return LinearProfile(j.get<double>());
  if (!j.is_array()) throw ConfigError("profile must be a number or a list of [t, value] pairs");
  std::vector<std::pair<double, double>> knots;
  for (const auto& k : j) {
    if (!k.is_array() || k.size() != 2) throw ConfigError("profile knots are [t, value] pairs");
    knots.emplace_back(k[0].get<double>(), k[1].get<double>());
  }
  return LinearProfile(std::move(knots));
}

nlohmann::json LinearProfile::to_json() const {
  if (knots_.size() == 1) return knots_.front().second;
  auto j = nlohmann::json::array();
  for (const auto& [t, v] : knots_) j.push_back({t, v});
  return j;
}

void Scenario::validate() const {
  auto rate = [](double r, const char* name) {
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  rate(corruption.bad_checksum, "bad_checksum_rate");
  rate(corruption.garbage_line, "garbage_line_rate");
  rate(corruption.truncation, "truncation_rate");
  if (corruption.bad_checksum + corruption.truncation > 1.0) {
    throw ConfigError("bad_checksum_rate + truncation_rate must not exceed 1");
  }
  if (!(gps_rate_hz > 0)) throw ConfigError("gps_rate_hz must be positive");
  if (duration <= Millis{0}) throw ConfigError("duration must be positive");
  if (zda_interval < Millis{0}) throw ConfigError("zda_interval must not be negative");
  if (!(base_lat > -90 && base_lat < 90) || !(base_lon >= -180 && base_lon <= 180)) {
    throw ConfigError("base position out of range");
  }
  if (!(noise_sigma_m >= 0)) throw ConfigError("noise_sigma_m must not be negative");
  if (fix_quality < 1 || fix_quality > 9) throw ConfigError("fix_quality must be 1..9");
  if (num_sats < 0 || num_sats > 99) throw ConfigError("num_sats must be 0..99");
  if (!(hdop >= 0)) throw ConfigError("hdop must not be negative");
  std::set<StationId> seen;
  for (const auto& s : stations) {
    if (!seen.insert(s.station).second) throw ConfigError("duplicate station " + s.station.to_string());
    if (s.station.gri < kMinGri || s.station.gri > kMaxGri) throw ConfigError("station gri out of range");
    if (!(s.rate_hz > 0)) throw ConfigError("station rate_hz must be positive");
    if (s.toa_us.min() < 0 || s.toa_us.max() >= s.station.gri * 10.0) {
      throw ConfigError("toa profile of " + s.station.to_string() + " leaves the GRI frame");
    }
  }
}

namespace {

Millis duration_field(const nlohmann::json& j, const char* key, Millis fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_number()) return Millis{static_cast<Millis::rep>(v.get<double>() * 1000.0)};
  return parse_duration(v.get<std::string>());
}

}  // namespace

Scenario Scenario::from_json(const nlohmann::json& j) {
  Scenario s;
  try {
    s.seed = j.value("seed", s.seed);
    if (j.contains("start")) s.start = parse_iso8601(j.at("start").get<std::string>());
    s.duration = duration_field(j, "duration", s.duration);
    s.gps_rate_hz = j.value("gps_rate_hz", s.gps_rate_hz);
    s.zda_interval = duration_field(j, "zda_interval", s.zda_interval);
    if (j.contains("base_position")) {
      const auto& p = j.at("base_position");
      s.base_lat = p.value("lat", s.base_lat);
      s.base_lon = p.value("lon", s.base_lon);
      s.base_alt_m = p.value("alt_m", s.base_alt_m);
    }
    s.noise_sigma_m = j.value("noise_sigma_m", s.noise_sigma_m);
    s.fix_quality = j.value("fix_quality", s.fix_quality);
    s.num_sats = j.value("num_sats", s.num_sats);
    s.hdop = j.value("hdop", s.hdop);
    if (j.contains("corruption")) {
      const auto& c = j.at("corruption");
      s.corruption.bad_checksum = c.value("bad_checksum_rate", 0.0);
      s.corruption.garbage_line = c.value("garbage_line_rate", 0.0);
      s.corruption.truncation = c.value("truncation_rate", 0.0);
    }
    for (const auto& st : j.value("stations", nlohmann::json::array())) {
      StationScenario station;
      station.station = StationId::parse(st.at("station").get<std::string>());
      station.rate_hz = st.value("rate_hz", station.rate_hz);
      if (st.contains("toa_us")) station.toa_us = LinearProfile::from_json(st.at("toa_us"));
      if (st.contains("snr_db")) station.snr_db = LinearProfile::from_json(st.at("snr_db"));
      if (st.contains("ecd_us")) station.ecd_us = LinearProfile::from_json(st.at("ecd_us"));
      s.stations.push_back(std::move(station));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  s.validate();
  return s;
}

Scenario Scenario::load(const std::filesystem::path& file) {
  const std::string text = read_file(file);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("scenario '" + file.string() + "': " + e.what());
  }
  return from_json(j);
}

nlohmann::ordered_json Scenario::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["start"] = format_iso8601(start);
  j["duration"] = format_duration(duration);
  j["gps_rate_hz"] = gps_rate_hz;
  j["zda_interval"] = format_duration(zda_interval);
  j["base_position"] = {{"lat", base_lat}, {"lon", base_lon}, {"alt_m", base_alt_m}};
  j["noise_sigma_m"] = noise_sigma_m;
  j["fix_quality"] = fix_quality;
  j["num_sats"] = num_sats;
  j["hdop"] = hdop;
  j["corruption"] = {{"bad_checksum_rate", corruption.bad_checksum},
                     {"garbage_line_rate", corruption.garbage_line},
                     {"truncation_rate", corruption.truncation}};
  auto stations_j = nlohmann::ordered_json::array();
  for (const auto& s : stations) {
    nlohmann::ordered_json st;
    st["station"] = s.station.to_string();
    st["rate_hz"] = s.rate_hz;
    st["toa_us"] = s.toa_us.to_json();
    st["snr_db"] = s.snr_db.to_json();
    st["ecd_us"] = s.ecd_us.to_json();
    stations_j.push_back(std::move(st));
  }
  j["stations"] = std::move(stations_j);
  return j;
}

}  // namespace loranrec
