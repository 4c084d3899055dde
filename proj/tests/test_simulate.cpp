#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <thread>

#include "loranrec/classify/checksum.hpp"
#include "loranrec/classify/router.hpp"
#include "loranrec/error.hpp"
#include "loranrec/clock.hpp"
#include "loranrec/parse/batch.hpp"
#include "loranrec/record/source.hpp"
#include "loranrec/simulate/generator.hpp"
#include "loranrec/simulate/scenario_source.hpp"
#include "loranrec/simulate/server.hpp"
#include "test_util.hpp"

using namespace loranrec;
using loranrec::testing::TempDir;
using namespace std::chrono_literals;

namespace {

Scenario one_minute() {
  Scenario s;
  s.stations.push_back({});
  return s;
}

std::size_t count_prefix(const GeneratedStream& g, std::string_view prefix) {
  std::size_t n = 0;
  for (const auto& e : g.emissions) n += e.bytes.starts_with(prefix);
  return n;
}

template <typename T>
std::vector<T> without_lines(std::vector<T> v) {
  for (auto& r : v) r.source_line = 0;
  return v;
}

std::string drain(ByteSource& src, Millis timeout = 5000ms) {
  std::string out;
  std::array<char, 65536> buf{};
  for (;;) {
    const auto r = src.read(buf, timeout);
    if (r.status == ByteSource::Status::kEof) return out;
    out.append(buf.data(), r.size);
  }
}

}  // namespace

TEST(Generator, OneMinuteExample) {
  const auto g = generate_stream(one_minute());
  EXPECT_EQ(count_prefix(g, "$GPGGA"), 60u);
  EXPECT_EQ(count_prefix(g, "$PLRM"), 6u);
  EXPECT_EQ(count_prefix(g, "$GPZDA"), 1u);
  EXPECT_EQ(g.truth.gps.size(), 60u);
  EXPECT_EQ(g.truth.loran.size(), 6u);
  EXPECT_EQ(g.truth.sentences, 67u);
  EXPECT_EQ(g.emissions.front().time, one_minute().start);
  // GGA precedes ZDA at the same instant.
  EXPECT_TRUE(g.emissions[0].bytes.starts_with("$GPGGA"));
  EXPECT_TRUE(g.emissions[1].bytes.starts_with("$GPZDA"));
  for (const auto& e : g.emissions) {
    EXPECT_TRUE(e.bytes.ends_with("\r\n"));
    EXPECT_EQ(verify_checksum(e.bytes.substr(0, e.bytes.size() - 2)), ChecksumStatus::kValid);
  }
}

TEST(Generator, SameScenarioSameBytes) {
  auto s = one_minute();
  s.corruption = {0.1, 0.1, 0.1};
  EXPECT_EQ(generate_stream(s).bytes(), generate_stream(s).bytes());
  auto other = s;
  other.seed = 2;
  EXPECT_NE(generate_stream(s).bytes(), generate_stream(other).bytes());
}

TEST(Generator, CorruptionRateWithinThreeSigma) {
  Scenario s;
  s.duration = Millis(10'000'000);  // 10 000 GGA at 1 Hz
  s.zda_interval = Millis{0};
  s.corruption.bad_checksum = 0.1;
  const auto g = generate_stream(s);
  ASSERT_EQ(g.truth.sentences, 10'000u);
  const double n = 10'000, p = 0.1;
  const double sigma = std::sqrt(n * p * (1 - p));
  EXPECT_NEAR(static_cast<double>(g.truth.corrupted.bad_checksum), n * p, 3 * sigma);
  std::uint64_t invalid = 0;
  for (const auto& e : g.emissions) {
    invalid += verify_checksum(e.bytes.substr(0, e.bytes.size() - 2)) == ChecksumStatus::kInvalid;
  }
  EXPECT_EQ(invalid, g.truth.corrupted.bad_checksum);
  EXPECT_EQ(g.truth.gps.size() + invalid, 10'000u);
}

TEST(Generator, TruthMatchesWhatTheParserRecovers) {
  auto s = one_minute();
  s.duration = Millis(600'000);
  s.stations.push_back({});
  s.stations.back().station = {9930, StationRole::kW};
  s.stations.back().snr_db = LinearProfile({{0, 5}, {600, 25}});
  s.corruption = {0.05, 0.05, 0.05};
  const auto g = generate_stream(s);
  TempDir dir;
  write_file_atomic(dir / "raw.log", g.bytes());
  route(dir / "raw.log", dir / "out");
  const auto classified = read_classified(dir / "out");
  ParseOptions opts;
  opts.reference_time = s.start;
  const auto batch = parse_segment(classified.lines, opts);
  EXPECT_EQ(without_lines(batch.gps), g.truth.gps);
  EXPECT_EQ(without_lines(batch.loran), g.truth.loran);
  const auto intact_w = std::count_if(g.truth.loran.begin(), g.truth.loran.end(),
                                      [](const auto& m) { return m.station_role == StationRole::kW; });
  EXPECT_EQ(g.truth.per_station.at({9930, StationRole::kW}), static_cast<std::uint64_t>(intact_w));
  EXPECT_LT(intact_w, 60);
}

TEST(ScenarioSource, DeliversEveryByteAndDrivesTheClock) {
  auto s = one_minute();
  const auto g = generate_stream(s);
  ManualClock clock(s.start - 1h);
  ScenarioSource src(g.emissions, clock, 10'000ms, std::nullopt, s.start + s.duration);
  std::array<char, 65536> buf{};
  std::string got;
  for (;;) {
    const auto r = src.read(buf, 100ms);
    if (r.status == ByteSource::Status::kEof) break;
    const auto t = clock.now();
    EXPECT_EQ((t - s.start) % 10'000ms, 0ms);
    got.append(buf.data(), r.size);
  }
  EXPECT_EQ(got, g.bytes());
  EXPECT_EQ(clock.now(), s.start + s.duration);
  EXPECT_TRUE(src.exhausted());
}

TEST(StreamServer, ParsesPacing) {
  EXPECT_EQ(Pacing::parse("realtime").mode, Pacing::Mode::kRealTime);
  EXPECT_EQ(Pacing::parse("unpaced").mode, Pacing::Mode::kUnpaced);
  const auto a = Pacing::parse("accelerated:3600");
  EXPECT_EQ(a.mode, Pacing::Mode::kAccelerated);
  EXPECT_DOUBLE_EQ(a.factor, 3600);
  EXPECT_THROW(Pacing::parse("accelerated:0"), ConfigError);
  EXPECT_THROW(Pacing::parse("warp"), ConfigError);
}

TEST(StreamServer, ReconnectingClientResumesWithoutSkipOrRepeat) {
  auto s = one_minute();
  s.duration = 600'000ms;
  const auto g = generate_stream(s);
  StreamServer server("127.0.0.1:0", g.emissions, Pacing::accelerated(600));  // about 1 s
  server.start();
  std::string got;
  {
    TcpSource first("127.0.0.1", server.port());
    std::array<char, 4096> buf{};
    while (got.size() < 2000) {
      const auto r = first.read(buf, 2000ms);
      ASSERT_EQ(r.status, ByteSource::Status::kData);
      got.append(buf.data(), r.size);
    }
  }
  // Bytes still in flight to the dropped client are lost with it; everything
  // the server handed to the network before noticing must precede the resume.
  std::this_thread::sleep_for(50ms);
  TcpSource second("127.0.0.1", server.port());
  const std::string rest = drain(second);
  server.wait();
  const std::string all = g.bytes();
  const auto resume = all.size() - rest.size();
  EXPECT_EQ(all.substr(resume), rest);
  EXPECT_GE(resume, got.size());
  EXPECT_EQ(all.substr(0, got.size()), got);
  EXPECT_EQ(server.clients_served(), 2u);
  EXPECT_TRUE(server.finished());
}

TEST(StreamServer, AcceleratedDayTakesAboutASecond) {
  Scenario s;
  s.duration = Millis(kDay);
  s.gps_rate_hz = 0.1;
  s.stations.push_back({});
  const auto g = generate_stream(s);
  StreamServer server("127.0.0.1:0", g.emissions, Pacing::accelerated(86'400));
  server.start();
  const auto t0 = std::chrono::steady_clock::now();
  TcpSource client("127.0.0.1", server.port());
  const std::string got = drain(client);
  const std::chrono::duration<double> took = std::chrono::steady_clock::now() - t0;
  EXPECT_EQ(got, g.bytes());
  EXPECT_GT(took.count(), 0.8);
  EXPECT_LT(took.count(), 3.0);
}
