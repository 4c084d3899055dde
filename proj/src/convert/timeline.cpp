#include "loranrec/convert/timeline.hpp"

#include <algorithm>

namespace loranrec {
namespace {

template <typename T>
std::vector<TimelineRecord> sorted_run(std::span<const T> records) {
  std::vector<TimelineRecord> run;
  run.reserve(records.size());
  for (const auto& r : records) run.push_back({r.timestamp, r, r.source_line});
  std::stable_sort(run.begin(), run.end(), [](const TimelineRecord& a, const TimelineRecord& b) {
    if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
    return a.arrival_index < b.arrival_index;
  });
  return run;
}

}  // namespace

std::vector<TimelineRecord> merge_sort(std::span<const GpsFix> gps, std::span<const LoranMeasurement> loran) {
  const auto gps_run = sorted_run(gps);
  const auto loran_run = sorted_run(loran);
  std::vector<TimelineRecord> out;
  out.reserve(gps_run.size() + loran_run.size());
  // std::merge takes from the first range on ties, which puts GPS first
  std::merge(gps_run.begin(), gps_run.end(), loran_run.begin(), loran_run.end(), std::back_inserter(out),
             [](const TimelineRecord& a, const TimelineRecord& b) { return a.timestamp < b.timestamp; });
  return out;
}

}  // namespace loranrec
