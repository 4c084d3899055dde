#include "loranrec/convert/summary.hpp"

#include <algorithm>

namespace loranrec {

std::vector<Interval> find_gaps(std::vector<UtcInstant> timestamps, Millis threshold) {
  std::sort(timestamps.begin(), timestamps.end());
  std::vector<Interval> gaps;
  for (std::size_t i = 1; i < timestamps.size(); ++i) {
    if (timestamps[i] - timestamps[i - 1] > threshold) gaps.push_back({timestamps[i - 1], timestamps[i]});
  }
  return gaps;
}

TimelineSummary summarize(std::span<const TimelineRecord> timeline, Millis gap_threshold) {
  TimelineSummary s;
  std::map<StationId, double> snr_sum;
  std::vector<UtcInstant> times;
  times.reserve(timeline.size());
  for (const auto& rec : timeline) {
    times.push_back(rec.timestamp);
    if (rec.is_gps()) {
      const GpsFix& fix = rec.gps();
      ++s.gps_records;
      if (fix.no_fix()) {
        ++s.no_fix;
        continue;
      }
      ++s.gps_fixes;
      if (!s.bbox) {
        s.bbox = BoundingBox{*fix.lat, *fix.lat, *fix.lon, *fix.lon};
      } else {
        s.bbox->min_lat = std::min(s.bbox->min_lat, *fix.lat);
        s.bbox->max_lat = std::max(s.bbox->max_lat, *fix.lat);
        s.bbox->min_lon = std::min(s.bbox->min_lon, *fix.lon);
        s.bbox->max_lon = std::max(s.bbox->max_lon, *fix.lon);
      }
    } else {
      const LoranMeasurement& m = rec.loran();
      auto& st = s.snr[m.station()];
      if (st.count == 0) {
        st.min = st.max = m.snr_db;
      } else {
        st.min = std::min(st.min, m.snr_db);
        st.max = std::max(st.max, m.snr_db);
      }
      ++st.count;
      snr_sum[m.station()] += m.snr_db;
    }
  }
  for (auto& [station, st] : s.snr) st.mean = snr_sum[station] / static_cast<double>(st.count);
  if (!times.empty()) {
    const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
    s.span = Interval{*lo, *hi};
  }
  s.gaps = find_gaps(std::move(times), gap_threshold);
  return s;
}

nlohmann::ordered_json TimelineSummary::to_json() const {
  nlohmann::ordered_json j;
  j["gps_records"] = gps_records;
  j["gps_fixes"] = gps_fixes;
  j["no_fix"] = no_fix;
  if (bbox) {
    j["bbox"] = {{"min_lat", bbox->min_lat}, {"max_lat", bbox->max_lat},
                 {"min_lon", bbox->min_lon}, {"max_lon", bbox->max_lon}};
  } else {
    j["bbox"] = nullptr;
  }
  j["time_span"] = span ? nlohmann::ordered_json{format_iso8601(span->start), format_iso8601(span->end)}
                        : nlohmann::ordered_json(nullptr);
  j["snr"] = nlohmann::ordered_json::object();
  for (const auto& [station, st] : snr) {
    j["snr"][station.to_string()] = {{"count", st.count}, {"min", st.min}, {"mean", st.mean}, {"max", st.max}};
  }
  j["gaps"] = nlohmann::ordered_json::array();
  for (const auto& g : gaps) j["gaps"].push_back({format_iso8601(g.start), format_iso8601(g.end)});
  return j;
}

}  // namespace loranrec
