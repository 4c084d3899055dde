#include <gtest/gtest.h>

#include "loranrec/convert/summary.hpp"

using namespace loranrec;

namespace {

const UtcInstant kT0 = parse_iso8601("2020-04-17T00:00:00Z");

LoranMeasurement snr_at(Millis offset, double snr) {
  LoranMeasurement m;
  m.timestamp = kT0 + offset;
  m.gri = 9930;
  m.snr_db = snr;
  return m;
}

}  // namespace

TEST(Summary, SnrStatistics) {
  const std::vector<LoranMeasurement> l{snr_at(Millis(0), 10), snr_at(Millis(10), 12), snr_at(Millis(20), 14)};
  const auto s = summarize(merge_sort({}, l));
  const auto& st = s.snr.at(StationId{9930, StationRole::kM});
  EXPECT_EQ(st.count, 3u);
  EXPECT_DOUBLE_EQ(st.mean, 12.0);
  EXPECT_EQ(st.min, 10);
  EXPECT_EQ(st.max, 14);
  EXPECT_EQ(s.span, (Interval{kT0, kT0 + Millis(20)}));
}

TEST(Summary, GapDetection) {
  const std::vector<LoranMeasurement> l{snr_at(Millis(0), 1), snr_at(std::chrono::minutes(1), 1),
                                        snr_at(std::chrono::minutes(121), 1), snr_at(std::chrono::minutes(122), 1)};
  const auto s = summarize(merge_sort({}, l), std::chrono::minutes(10));
  ASSERT_EQ(s.gaps.size(), 1u);
  EXPECT_EQ(s.gaps[0], (Interval{kT0 + std::chrono::minutes(1), kT0 + std::chrono::minutes(121)}));
}

TEST(Summary, NoFixExcludedFromPositionStats) {
  std::vector<GpsFix> g(3);
  for (int i = 0; i < 3; ++i) g[i].timestamp = kT0 + Millis(i);
  g[0].lat = 1;
  g[0].lon = 2;
  g[0].fix_quality = 1;
  g[1].lat = 3;
  g[1].lon = 4;
  g[1].fix_quality = 1;
  const auto s = summarize(merge_sort(g, {}));
  EXPECT_EQ(s.gps_records, 3u);
  EXPECT_EQ(s.gps_fixes, 2u);
  EXPECT_EQ(s.no_fix, 1u);
  ASSERT_TRUE(s.bbox);
  EXPECT_EQ(s.bbox->min_lat, 1);
  EXPECT_EQ(s.bbox->max_lon, 4);
}

TEST(Summary, EmptyTimeline) {
  const auto s = summarize({});
  EXPECT_EQ(s.gps_records, 0u);
  EXPECT_FALSE(s.span);
  EXPECT_FALSE(s.bbox);
  EXPECT_TRUE(s.gaps.empty());
}
