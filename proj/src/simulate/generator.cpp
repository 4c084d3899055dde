#include "loranrec/simulate/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "loranrec/classify/checksum.hpp"
#include "loranrec/convert/export.hpp"
#include "loranrec/fs_util.hpp"
#include "loranrec/parse/sentences.hpp"

namespace loranrec {
namespace {

constexpr double kMetresPerDegree = 111'320.0;

enum class EventKind { kGga = 0, kZda = 1, kLoran = 2 };

struct Event {
  UtcInstant time;
  EventKind kind;
  std::size_t station = 0;
};

// Instants start + k / rate that fall before start + duration.
void schedule(std::vector<Event>& out, const Scenario& s, double rate_hz, EventKind kind, std::size_t station = 0) {
  for (std::int64_t k = 0;; ++k) {
    const Millis offset{std::llround(static_cast<double>(k) * 1000.0 / rate_hz)};
    if (offset >= s.duration) break;
    out.push_back({s.start + offset, kind, station});
  }
}

char hex_digit(unsigned v) { return "0123456789ABCDEF"[v & 0xF]; }

class Corrupter {
 public:
  Corrupter(const CorruptionRates& rates, std::mt19937_64& rng) : rates_(rates), rng_(rng) {}

  enum class Outcome { kIntact, kBadChecksum, kTruncated };

  // `line` is a complete sentence ending in *HH, without terminator.
  Outcome apply(std::string& line) {
    const double u = unit_(rng_);
    if (u < rates_.bad_checksum) {
      const unsigned good = std::stoul(line.substr(line.size() - 2), nullptr, 16);
      const unsigned bad = good ^ static_cast<unsigned>(std::uniform_int_distribution<int>(1, 255)(rng_));
      line[line.size() - 2] = hex_digit(bad >> 4);
      line[line.size() - 1] = hex_digit(bad);
      return Outcome::kBadChecksum;
    }
    if (u < rates_.bad_checksum + rates_.truncation) {
      // Cut at or before the last comma so the remainder never parses.
      const std::size_t last_comma = line.rfind(',');
      const auto cut = std::uniform_int_distribution<std::size_t>(1, last_comma)(rng_);
      line.resize(cut);
      return Outcome::kTruncated;
    }
    return Outcome::kIntact;
  }

  std::optional<std::string> garbage() {
    if (!(unit_(rng_) < rates_.garbage_line)) return std::nullopt;
    const auto len = std::uniform_int_distribution<int>(4, 40)(rng_);
    std::uniform_int_distribution<int> byte(0x20, 0xFF);
    std::string out;
    while (static_cast<int>(out.size()) < len) {
      const auto c = static_cast<char>(byte(rng_));
      if (c == '$' || c == '\x7f') continue;
      out += c;
    }
    return out;
  }

 private:
  CorruptionRates rates_;
  std::mt19937_64& rng_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace

std::string GeneratedStream::bytes() const {
  std::string out;
  for (const auto& e : emissions) out += e.bytes;
  return out;
}

GeneratedStream generate_stream(const Scenario& scenario) {
  scenario.validate();
  std::vector<Event> events;
  schedule(events, scenario, scenario.gps_rate_hz, EventKind::kGga);
  if (scenario.zda_interval > Millis{0}) {
    schedule(events, scenario, 1000.0 / static_cast<double>(scenario.zda_interval.count()), EventKind::kZda);
  }
  for (std::size_t i = 0; i < scenario.stations.size(); ++i) {
    schedule(events, scenario, scenario.stations[i].rate_hz, EventKind::kLoran, i);
  }
  std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.station < b.station;
  });

  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  Corrupter corrupter(scenario.corruption, rng);
  const double lon_scale = kMetresPerDegree * std::cos(scenario.base_lat * std::numbers::pi / 180.0);

  GeneratedStream out;
  out.emissions.reserve(events.size());
  for (const auto& ev : events) {
    const double t = std::chrono::duration<double>(ev.time - scenario.start).count();
    std::string line;
    std::optional<GpsFix> fix;
    std::optional<LoranMeasurement> meas;
    switch (ev.kind) {
      case EventKind::kGga: {
        GpsFix f;
        f.timestamp = ev.time;
        f.lat = scenario.base_lat + scenario.noise_sigma_m * noise(rng) / kMetresPerDegree;
        f.lon = scenario.base_lon + scenario.noise_sigma_m * noise(rng) / lon_scale;
        f.alt_m = scenario.base_alt_m + scenario.noise_sigma_m * noise(rng);
        f.fix_quality = scenario.fix_quality;
        f.num_sats = scenario.num_sats;
        f.hdop = scenario.hdop;
        fix = quantize(f);
        line = serialize(*fix);
        break;
      }
      case EventKind::kZda:
        line = serialize_zda(ev.time);
        ++out.truth.zda;
        break;
      case EventKind::kLoran: {
        const auto& st = scenario.stations[ev.station];
        LoranMeasurement m;
        m.timestamp = ev.time;
        m.gri = st.station.gri;
        m.station_role = st.station.role;
        m.toa_us = st.toa_us.at(t);
        m.snr_db = st.snr_db.at(t);
        m.ecd_us = st.ecd_us.at(t);
        meas = quantize(m);
        line = serialize(*meas);
        break;
      }
    }
    ++out.truth.sentences;
    switch (corrupter.apply(line)) {
      case Corrupter::Outcome::kIntact:
        if (fix) out.truth.gps.push_back(*fix);
        if (meas) {
          out.truth.loran.push_back(*meas);
          ++out.truth.per_station[meas->station()];
        }
        break;
      case Corrupter::Outcome::kBadChecksum:
        ++out.truth.corrupted.bad_checksum;
        break;
      case Corrupter::Outcome::kTruncated:
        ++out.truth.corrupted.truncated;
        break;
    }
    out.emissions.push_back({ev.time, line + "\r\n"});
    if (auto g = corrupter.garbage()) {
      ++out.truth.corrupted.garbage;
      out.emissions.push_back({ev.time, *g + "\r\n"});
    }
  }
  return out;
}

void write_ground_truth(const GroundTruth& truth, const std::filesystem::path& dir) {
  std::vector<TimelineRecord> gps;
  gps.reserve(truth.gps.size());
  for (const auto& f : truth.gps) gps.push_back({f.timestamp, f, 0});
  std::vector<TimelineRecord> loran;
  loran.reserve(truth.loran.size());
  for (const auto& m : truth.loran) loran.push_back({m.timestamp, m, 0});
  std::filesystem::create_directories(dir);
  write_file_atomic(dir / "truth_gps.csv", render_gps(gps, ExportFormat::kColumns));
  write_file_atomic(dir / "truth_loran.csv", render_loran(loran, ExportFormat::kColumns));
}

}  // namespace loranrec
