#include <gtest/gtest.h>

#include "loranrec/error.hpp"
#include "loranrec/time.hpp"

using namespace loranrec;
using namespace std::chrono;

TEST(Time, FormatsAndParsesExtendedForm) {
  const UtcInstant t = sys_days{2020y / April / 17} + hours(9) + minutes(27) + seconds(50) + milliseconds(125);
  EXPECT_EQ(format_iso8601(t), "2020-04-17T09:27:50.125Z");
  EXPECT_EQ(parse_iso8601("2020-04-17T09:27:50.125Z"), t);
  EXPECT_EQ(parse_iso8601("2020-04-17T09:27:50Z"), t - milliseconds(125));
}

TEST(Time, BasicFormRoundTrips) {
  const UtcInstant t = sys_days{2020y / April / 17} + hours(23);
  EXPECT_EQ(format_iso8601_basic(t), "20200417T230000Z");
  EXPECT_EQ(try_parse_iso8601("20200417T230000Z"), t);
}

TEST(Time, RejectsMalformedInstants) {
  EXPECT_FALSE(try_parse_iso8601("2020-13-01T00:00:00Z"));
  EXPECT_FALSE(try_parse_iso8601("2020-04-17 00:00:00"));
  EXPECT_FALSE(try_parse_iso8601("2020-02-30T00:00:00Z"));
  EXPECT_THROW(parse_iso8601("yesterday"), ConfigError);
}

TEST(Time, SplitsDateAndTimeOfDay) {
  const UtcInstant t = sys_days{2020y / April / 17} + hours(12) + milliseconds(1);
  EXPECT_EQ(date_of(t), 2020y / April / 17);
  EXPECT_EQ(time_of_day(t), hours(12) + milliseconds(1));
  EXPECT_EQ(make_instant(2020y / April / 17, hours(12) + milliseconds(1)), t);
}

TEST(Time, Durations) {
  EXPECT_EQ(parse_duration("500ms"), milliseconds(500));
  EXPECT_EQ(parse_duration("1s"), seconds(1));
  EXPECT_EQ(parse_duration("10min"), minutes(10));
  EXPECT_EQ(parse_duration("2h"), hours(2));
  EXPECT_EQ(parse_duration("1d"), hours(24));
  EXPECT_EQ(parse_duration("30"), seconds(30));
  EXPECT_THROW(parse_duration("soon"), ConfigError);
  for (auto d : {milliseconds(1500), milliseconds(1000), milliseconds(300000), milliseconds(86400000)}) {
    EXPECT_EQ(parse_duration(format_duration(d)), d);
  }
}
