#include <gtest/gtest.h>

#include <random>

#include "loranrec/error.hpp"
#include "loranrec/orchestrate/rotation.hpp"

using namespace loranrec;
using namespace std::chrono;

TEST(NextBoundary, Examples) {
  const RotationPolicy midnight;
  EXPECT_EQ(next_boundary(parse_iso8601("2020-04-17T09:30:00Z"), midnight, {}),
            parse_iso8601("2020-04-18T00:00:00Z"));
  const auto start = parse_iso8601("2020-04-17T00:00:00Z");
  EXPECT_EQ(next_boundary(start, RotationPolicy::parse("24h"), start), parse_iso8601("2020-04-18T00:00:00Z"));
  EXPECT_EQ(next_boundary(parse_iso8601("2020-04-18T00:00:00Z"), midnight, {}),
            parse_iso8601("2020-04-19T00:00:00Z"));
  const auto half_past = parse_iso8601("2020-04-17T09:30:00Z");
  EXPECT_EQ(next_boundary(half_past, RotationPolicy::parse("24h"), half_past),
            parse_iso8601("2020-04-18T09:30:00Z"));
}

TEST(NextBoundary, RandomisedProperties) {
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<long long> offset(-10LL * 86'400'000, 40LL * 86'400'000);
  std::uniform_int_distribution<long long> interval(1, 3LL * 86'400'000);
  const auto base = parse_iso8601("2020-04-17T00:00:00Z");
  for (int i = 0; i < 5000; ++i) {
    const UtcInstant now = base + Millis(offset(rng));
    const auto m = next_boundary(now, RotationPolicy{}, {});
    ASSERT_GT(m, now);
    ASSERT_LE(m - now, Millis(kDay));
    ASSERT_EQ(time_of_day(m), Millis(0));

    const UtcInstant start = base + Millis(offset(rng));
    const RotationPolicy fixed{RotationMode::kFixedInterval, Millis(interval(rng))};
    const auto b = next_boundary(now, fixed, start);
    ASSERT_GT(b, now);
    ASSERT_LE(b - now, fixed.interval);
    ASSERT_EQ((b - start) % fixed.interval, Millis(0));
  }
}

TEST(RotationPolicy, ParseAndValidate) {
  EXPECT_EQ(RotationPolicy::parse("utc-midnight").mode, RotationMode::kUtcMidnight);
  const auto p = RotationPolicy::parse("6h");
  EXPECT_EQ(p.mode, RotationMode::kFixedInterval);
  EXPECT_EQ(p.interval, hours(6));
  EXPECT_EQ(RotationPolicy::parse(p.to_string()), p);
  EXPECT_THROW(RotationPolicy::parse("0s"), ConfigError);
  EXPECT_THROW(RotationPolicy::parse("weekly"), ConfigError);
}
