#include <gtest/gtest.h>

#include "loranrec/error.hpp"
#include "loranrec/orchestrate/config.hpp"
#include "loranrec/simulate/scenario.hpp"
#include "test_util.hpp"

using namespace loranrec;
using loranrec::testing::TempDir;

TEST(PipelineConfig, LoadsAndResolvesRelativeOutDir) {
  TempDir dir;
  write_file_atomic(dir / "cfg.json", R"({
    "source": "tcp:127.0.0.1:4001", "out_dir": "data", "rotation": "utc-midnight",
    "flush_interval": "500ms", "format": "lines", "max_workers": 3,
    "retry": {"max_attempts": 4, "initial_backoff": "100ms", "max_backoff": "2s"},
    "start_date": "2020-04-17",
    "clock": {"mode": "accelerated", "start": "2020-04-17T00:00:00Z", "factor": 86400}
  })");
  const auto c = PipelineConfig::load(dir / "cfg.json");
  EXPECT_EQ(c.out_dir, dir / "data");
  EXPECT_EQ(c.flush_interval, Millis(500));
  EXPECT_EQ(c.format, ExportFormat::kLines);
  EXPECT_EQ(c.max_workers, 3u);
  EXPECT_EQ(c.retry.max_attempts, 4);
  EXPECT_EQ(c.retry.max_backoff, Millis(2000));
  EXPECT_EQ(c.clock.mode, ClockConfig::Mode::kAccelerated);
  ASSERT_TRUE(c.start_date);
  const auto again = PipelineConfig::from_json(c.to_json());
  EXPECT_EQ(again.to_json(), c.to_json());
  EXPECT_NEAR(std::chrono::duration<double>(make_clock(c.clock)->now() - c.clock.start).count(), 0.0, 86400.0);
}

TEST(PipelineConfig, RejectsBadValues) {
  EXPECT_THROW(PipelineConfig::from_json(nlohmann::json::parse(R"({"source": "tcp:x:1"})")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_json(nlohmann::json::parse(R"({"source": "tcp:x:1", "out_dir": "d",
    "format": "xml"})")), ConfigError);
  EXPECT_THROW(PipelineConfig::from_json(nlohmann::json::parse(R"({"source": "ftp:x", "out_dir": "d"})")),
               ConfigError);
  EXPECT_THROW(PipelineConfig::load("/nonexistent/cfg.json"), Error);
}

TEST(Scenario, DefaultsAndJson) {
  const auto s = Scenario::from_json(nlohmann::json::parse(R"({
    "seed": 3, "duration": "1h",
    "stations": [{"station": "9930M", "snr_db": [[0, 10], [3600, 20]]}],
    "corruption": {"bad_checksum_rate": 0.01}
  })"));
  EXPECT_EQ(s.start, parse_iso8601("2020-04-17T00:00:00Z"));
  EXPECT_EQ(s.duration, std::chrono::hours(1));
  ASSERT_EQ(s.stations.size(), 1u);
  EXPECT_DOUBLE_EQ(s.stations[0].snr_db.at(1800), 15.0);
  EXPECT_DOUBLE_EQ(s.stations[0].snr_db.at(-5), 10.0);
  EXPECT_DOUBLE_EQ(s.stations[0].snr_db.at(99999), 20.0);
  const auto again = Scenario::from_json(s.to_json());
  EXPECT_EQ(again.to_json(), s.to_json());
}

TEST(Scenario, Validation) {
  auto bad = [](const char* text) { return Scenario::from_json(nlohmann::json::parse(text)); };
  EXPECT_THROW(bad(R"({"corruption": {"bad_checksum_rate": 1.5}})"), ConfigError);
  EXPECT_THROW(bad(R"({"gps_rate_hz": 0})"), ConfigError);
  EXPECT_THROW(bad(R"({"stations": [{"station": "3000M"}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"stations": [{"station": "9930M", "toa_us": 99300}]})"), ConfigError);
  EXPECT_THROW(bad(R"({"stations": [{"station": "9930M"}, {"station": "9930M"}]})"), ConfigError);
}
