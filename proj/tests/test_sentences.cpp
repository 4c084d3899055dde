#include <gtest/gtest.h>

#include <random>

#include "loranrec/classify/checksum.hpp"
#include "loranrec/classify/message_class.hpp"
#include "loranrec/error.hpp"
#include "loranrec/parse/sentences.hpp"

using namespace loranrec;
using namespace std::chrono;

namespace {

DateContext ctx_on(Date d, std::optional<Millis> last = std::nullopt) {
  return DateContext{d, last, DateSource::kZda};
}

Millis hms(int h, int m, int s) { return hours(h) + minutes(m) + seconds(s); }

GpsFix parse_gga_line(const std::string& line, DateContext& ctx) {
  const auto f = split_fields(line);
  return parse_gga(f, ctx);
}

LoranMeasurement parse_loran_line(const std::string& line, DateContext& ctx) {
  const auto f = split_fields(line);
  return parse_loran(f, ctx);
}

}  // namespace

TEST(Coordinate, Examples) {
  EXPECT_NEAR(parse_coordinate("4916.45", 'N'), 49.0 + 16.45 / 60.0, 1e-12);
  EXPECT_EQ(parse_coordinate("0000.00", 'N'), 0.0);
  EXPECT_NEAR(parse_coordinate("12311.12", 'W'), -(123.0 + 11.12 / 60.0), 1e-12);
  EXPECT_NEAR(parse_coordinate("4916.45", 'S'), -(49.0 + 16.45 / 60.0), 1e-12);
}

TEST(Coordinate, Rejects) {
  EXPECT_THROW(parse_coordinate("916.45", 'N'), ParseError);
  EXPECT_THROW(parse_coordinate("4960.00", 'N'), ParseError);
  EXPECT_THROW(parse_coordinate("9100.00", 'N'), ParseError);
  EXPECT_THROW(parse_coordinate("4916.45", 'Q'), ParseError);
  EXPECT_THROW(parse_coordinate("49a6.45", 'N'), ParseError);
}

TEST(TimeOfDay, Fractions) {
  EXPECT_EQ(parse_time_of_day("092750"), hms(9, 27, 50));
  EXPECT_EQ(parse_time_of_day("092750.5"), hms(9, 27, 50) + Millis(500));
  EXPECT_EQ(parse_time_of_day("092750.05"), hms(9, 27, 50) + Millis(50));
  EXPECT_EQ(parse_time_of_day("092750.123"), hms(9, 27, 50) + Millis(123));
  EXPECT_THROW(parse_time_of_day("092750.1234"), ParseError);
  EXPECT_THROW(parse_time_of_day("246000"), ParseError);
}

TEST(ResolveTimestamp, Examples) {
  auto ctx = ctx_on(2020y / April / 17, hms(23, 59, 59));
  EXPECT_EQ(resolve_timestamp(hms(0, 0, 1), ctx), parse_iso8601("2020-04-18T00:00:01Z"));
  EXPECT_EQ(ctx.current_date, 2020y / April / 18);

  ctx = ctx_on(2020y / April / 17, hms(10, 0, 0));
  EXPECT_EQ(resolve_timestamp(hms(10, 0, 1), ctx), parse_iso8601("2020-04-17T10:00:01Z"));

  ctx = ctx_on(2020y / April / 17, hms(12, 0, 0));
  EXPECT_EQ(resolve_timestamp(hms(11, 0, 0), ctx), parse_iso8601("2020-04-17T11:00:00Z"));
  EXPECT_EQ(ctx.current_date, 2020y / April / 17);
}

TEST(SeedContext, PicksNearestDay) {
  const auto ref = parse_iso8601("2020-04-18T00:00:00Z");
  EXPECT_EQ(seed_context(ref, hms(23, 59, 59), DateSource::kZda).current_date, 2020y / April / 17);
  EXPECT_EQ(seed_context(ref, hms(0, 0, 5), DateSource::kZda).current_date, 2020y / April / 18);
  const auto late = parse_iso8601("2020-04-17T23:59:00Z");
  EXPECT_EQ(seed_context(late, hms(0, 0, 30), DateSource::kZda).current_date, 2020y / April / 18);
}

TEST(Gga, DirectFieldMapping) {
  auto ctx = ctx_on(2020y / April / 17);
  const auto fix = parse_gga_line(with_checksum("GPGGA,235959.000,4916.4500,N,12311.1200,W,1,08,0.9,61.7,M,55.2,M,,"), ctx);
  EXPECT_EQ(fix.timestamp, parse_iso8601("2020-04-17T23:59:59.000Z"));
  EXPECT_EQ(fix.fix_quality, 1);
  EXPECT_EQ(fix.num_sats, 8);
  EXPECT_NEAR(*fix.lat, 49.274166666, 1e-8);
  EXPECT_NEAR(*fix.lon, -123.185333333, 1e-8);
  EXPECT_EQ(*fix.alt_m, 61.7);
  EXPECT_EQ(*fix.hdop, 0.9);
  EXPECT_FALSE(fix.no_fix());
}

TEST(Gga, NoFixRecord) {
  auto ctx = ctx_on(2020y / April / 17);
  const auto fix = parse_gga_line(with_checksum("GPGGA,120000.000,,,,,0,00,,,M,,M,,"), ctx);
  EXPECT_TRUE(fix.no_fix());
  EXPECT_FALSE(fix.lat);
  EXPECT_FALSE(fix.lon);
}

TEST(Gga, ErrorsLeaveContextUntouched) {
  auto ctx = ctx_on(2020y / April / 17, hms(23, 0, 0));
  EXPECT_THROW(parse_gga_line("$GPGGA,010000.000,4916.45,N", ctx), ParseError);
  EXPECT_THROW(parse_gga_line(with_checksum("GPGGA,010000.000,4916.4500,X,12311.1200,W,1,08,0.9,61.7,M,,M,,"), ctx),
               ParseError);
  EXPECT_EQ(ctx.current_date, 2020y / April / 17);
  EXPECT_EQ(ctx.last_tod, hms(23, 0, 0));
}

TEST(Gga, ZeroCoordinatesUseNorthAndEast) {
  GpsFix f;
  f.timestamp = parse_iso8601("2020-04-17T00:00:00Z");
  f.lat = 0.0;
  f.lon = 0.0;
  f.fix_quality = 1;
  f.num_sats = 5;
  const auto line = serialize(f);
  EXPECT_NE(line.find(",0000.0000,N,00000.0000,E,"), std::string::npos) << line;
  EXPECT_EQ(verify_checksum(line), ChecksumStatus::kValid);
}

TEST(DateSentences, Examples) {
  const std::string zda_line = with_checksum("GPZDA,000000.000,17,04,2020,00,00");
  auto zda = split_fields(zda_line);
  auto u = parse_date_sentence(zda, classify_line("$GPZDA,"));
  EXPECT_EQ(u.date, 2020y / April / 17);
  EXPECT_EQ(u.source, DateSource::kZda);

  const std::string rmc_line = with_checksum("GPRMC,092750.000,A,5321.6802,N,00630.3372,W,0.02,31.66,170420,,,A");
  auto rmc = split_fields(rmc_line);
  u = parse_date_sentence(rmc, classify_line("$GPRMC,"));
  EXPECT_EQ(u.date, 2020y / April / 17);
  EXPECT_EQ(u.tod, hms(9, 27, 50));

  auto old = split_fields("$GPRMC,092750.000,A,5321.6802,N,00630.3372,W,0.02,31.66,170499,,,A");
  EXPECT_EQ(parse_date_sentence(old, classify_line("$GPRMC,")).date, 1999y / April / 17);

  const std::string bad_line = with_checksum("GPZDA,000000.000,17,13,2020,00,00");
  auto bad = split_fields(bad_line);
  EXPECT_THROW(parse_date_sentence(bad, classify_line("$GPZDA,")), ParseError);
}

TEST(DateSentences, ApplyUpdate) {
  std::optional<DateContext> ctx;
  apply_date_update(ctx, {2020y / April / 17, hms(1, 0, 0), DateSource::kZda});
  ASSERT_TRUE(ctx);
  EXPECT_EQ(ctx->current_date, 2020y / April / 17);
  apply_date_update(ctx, {2020y / April / 16, std::nullopt, DateSource::kRmc});
  EXPECT_EQ(ctx->current_date, 2020y / April / 17);
  apply_date_update(ctx, {2020y / April / 18, hms(0, 0, 0), DateSource::kRmc});
  EXPECT_EQ(ctx->current_date, 2020y / April / 18);
  EXPECT_EQ(ctx->source, DateSource::kRmc);
}

TEST(Loran, Example) {
  auto ctx = ctx_on(2020y / April / 17);
  const auto m = parse_loran_line("$PLRM,120000.00,9930,M,45678.9,12.5,1.2", ctx);
  EXPECT_EQ(m.gri, 9930);
  EXPECT_EQ(m.station_role, StationRole::kM);
  EXPECT_EQ(m.toa_us, 45678.9);
  EXPECT_EQ(m.snr_db, 12.5);
  EXPECT_EQ(m.ecd_us, 1.2);
  EXPECT_EQ(m.timestamp, parse_iso8601("2020-04-17T12:00:00Z"));
  EXPECT_EQ(m.station().to_string(), "9930M");
}

TEST(Loran, RangeChecks) {
  auto ctx = ctx_on(2020y / April / 17);
  EXPECT_THROW(parse_loran_line("$PLRM,120000.00,3000,M,100.0,12.5,1.2", ctx), ParseError);
  EXPECT_THROW(parse_loran_line("$PLRM,120000.00,9930,Q,100.0,12.5,1.2", ctx), ParseError);
  EXPECT_THROW(parse_loran_line("$PLRM,120000.00,9930,M,99300.0,12.5,1.2", ctx), ParseError);
  EXPECT_THROW(parse_loran_line("$PLRM,120000.00,9930,M,100.0,12.5", ctx), ParseError);
}

TEST(RoundTrip, RandomGpsFixes) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lat(-89.9, 89.9), lon(-179.9, 179.9), alt(-400, 9000), hd(0, 50);
  std::uniform_int_distribution<int> ms(0, 86'399'999), q(0, 8), sats(0, 24);
  for (int i = 0; i < 1000; ++i) {
    GpsFix f;
    f.timestamp = make_instant(2020y / April / 17, Millis(ms(rng)));
    f.fix_quality = q(rng);
    if (f.fix_quality != 0) {
      f.lat = lat(rng);
      f.lon = lon(rng);
    }
    f.alt_m = alt(rng);
    f.hdop = hd(rng);
    f.num_sats = sats(rng);
    const auto expected = quantize(f);
    auto ctx = ctx_on(2020y / April / 17);
    const auto line = serialize(f);
    ASSERT_EQ(verify_checksum(line), ChecksumStatus::kValid);
    const auto back = parse_gga_line(line, ctx);
    ASSERT_EQ(back, expected) << line;
    if (f.lat) {
      EXPECT_LE(std::abs(*back.lat - *f.lat), 1e-6);
      EXPECT_LE(std::abs(*back.lon - *f.lon), 1e-6);
    }
  }
}

TEST(RoundTrip, RandomLoranMeasurements) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> ms(0, 86'399'999), gri(kMinGri, kMaxGri), role(0, 5);
  std::uniform_real_distribution<double> unit(0, 1), snr(-20, 40), ecd(-5, 5);
  const char roles[] = "MVWXYZ";
  for (int i = 0; i < 1000; ++i) {
    LoranMeasurement m;
    m.timestamp = make_instant(2020y / April / 17, Millis(ms(rng)));
    m.gri = gri(rng);
    m.station_role = *station_role_from_char(roles[role(rng)]);
    m.toa_us = unit(rng) * (m.gri * 10.0 - 0.1);
    m.snr_db = snr(rng);
    m.ecd_us = ecd(rng);
    const auto expected = quantize(m);
    auto ctx = ctx_on(2020y / April / 17);
    const auto back = parse_loran_line(serialize(m), ctx);
    ASSERT_EQ(back, expected) << serialize(m);
  }
}
