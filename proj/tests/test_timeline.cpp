#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "loranrec/convert/timeline.hpp"

using namespace loranrec;

namespace {

UtcInstant at(long long ms) { return UtcInstant{Millis{ms}}; }

GpsFix gps(long long ms, std::uint64_t line) {
  GpsFix g;
  g.timestamp = at(ms);
  g.source_line = line;
  return g;
}

LoranMeasurement loran(long long ms, std::uint64_t line) {
  LoranMeasurement m;
  m.timestamp = at(ms);
  m.gri = 9930;
  m.source_line = line;
  return m;
}

}  // namespace

TEST(MergeSort, TieBreakPutsGpsFirst) {
  const std::vector<GpsFix> g{gps(1000, 1), gps(0, 3)};
  const std::vector<LoranMeasurement> l{loran(1000, 2)};
  const auto out = merge_sort(g, l);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_TRUE(out[0].is_gps());
  EXPECT_EQ(out[0].timestamp, at(0));
  EXPECT_TRUE(out[1].is_gps());
  EXPECT_EQ(out[1].timestamp, at(1000));
  EXPECT_FALSE(out[2].is_gps());
}

TEST(MergeSort, EmptyInputs) { EXPECT_TRUE(merge_sort({}, {}).empty()); }

TEST(MergeSort, MatchesStableSortOracle) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long long> ts(0, 200);  // narrow range forces ties
  std::vector<GpsFix> g;
  std::vector<LoranMeasurement> l;
  for (std::uint64_t i = 0; i < 5000; ++i) {
    if (rng() & 1) {
      g.push_back(gps(ts(rng), rng() % 50));
    } else {
      l.push_back(loran(ts(rng), rng() % 50));
    }
  }
  struct Tagged {
    long long ts;
    int kind;
    std::uint64_t arrival;
    std::size_t index;
  };
  std::vector<Tagged> oracle;
  for (std::size_t i = 0; i < g.size(); ++i) oracle.push_back({g[i].timestamp.time_since_epoch().count(), 0, g[i].source_line, i});
  for (std::size_t i = 0; i < l.size(); ++i) oracle.push_back({l[i].timestamp.time_since_epoch().count(), 1, l[i].source_line, i});
  std::stable_sort(oracle.begin(), oracle.end(), [](const Tagged& a, const Tagged& b) {
    return std::tie(a.ts, a.kind, a.arrival) < std::tie(b.ts, b.kind, b.arrival);
  });
  const auto out = merge_sort(g, l);
  ASSERT_EQ(out.size(), oracle.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& o = oracle[i];
    ASSERT_EQ(out[i].is_gps(), o.kind == 0) << i;
    if (o.kind == 0) {
      ASSERT_EQ(out[i].gps(), g[o.index]) << i;
    } else {
      ASSERT_EQ(out[i].loran(), l[o.index]) << i;
    }
    ASSERT_EQ(out[i].arrival_index, o.arrival);
  }
}
