#include <gtest/gtest.h>

#include "loranrec/classify/checksum.hpp"
#include "loranrec/parse/batch.hpp"
#include "test_util.hpp"

using namespace loranrec;
using namespace std::chrono;

namespace {

std::vector<ClassifiedLine> classified(const std::vector<std::string>& raws) {
  std::vector<ClassifiedLine> out;
  for (const auto& raw : raws) {
    ClassifiedLine l;
    l.raw = raw;
    l.cls = classify_line(raw);
    l.checksum = verify_checksum(raw);
    l.line_number = out.size() + 1;
    if (l.cls.kind == MessageKind::kUnknown) {
      l.quarantine = QuarantineReason::kUnknownClass;
      l.store = "quarantine";
    } else {
      l.store = l.cls.store_name();
    }
    out.push_back(std::move(l));
  }
  return out;
}

std::string gga(const std::string& tod) {
  return with_checksum("GPGGA," + tod + ",4500.0000,N,01500.0000,E,1,09,0.9,120.0,M,,M,,");
}

}  // namespace

TEST(ParseSegment, DateFromFirstZdaEvenWhenItComesLater) {
  const auto lines = classified({gga("235959.000"), with_checksum("GPZDA,000000.000,18,04,2020,00,00"),
                                 gga("000000.000"), gga("000001.000")});
  const auto batch = parse_segment(lines);
  ASSERT_EQ(batch.gps.size(), 3u);
  EXPECT_EQ(batch.gps[0].timestamp, parse_iso8601("2020-04-17T23:59:59Z"));
  EXPECT_EQ(batch.gps[1].timestamp, parse_iso8601("2020-04-18T00:00:00Z"));
  EXPECT_EQ(batch.gps[2].timestamp, parse_iso8601("2020-04-18T00:00:01Z"));
  EXPECT_EQ(batch.gps[0].source_line, 1u);
  EXPECT_EQ(batch.date_sentences, 1u);
}

TEST(ParseSegment, FallsBackToReferenceTimeThenStartDate) {
  const auto lines = classified({gga("120000.000"), "$PLRM,120000.0,9930,M,100.0,10.0,0.0"});
  ParseOptions opts;
  opts.reference_time = parse_iso8601("2020-04-17T00:00:00Z");
  auto batch = parse_segment(lines, opts);
  ASSERT_EQ(batch.gps.size(), 1u);
  EXPECT_EQ(batch.gps[0].timestamp, parse_iso8601("2020-04-17T12:00:00Z"));
  ASSERT_EQ(batch.loran.size(), 1u);
  EXPECT_EQ(batch.loran[0].source_line, 2u);

  ParseOptions by_date;
  by_date.start_date = 2021y / January / 2;
  batch = parse_segment(lines, by_date);
  EXPECT_EQ(batch.gps[0].timestamp, parse_iso8601("2021-01-02T12:00:00Z"));

  batch = parse_segment(lines);
  EXPECT_TRUE(batch.gps.empty());
  EXPECT_EQ(batch.errors.size(), 2u);
}

TEST(ParseSegment, AccountsForEveryLine) {
  const auto lines = classified({gga("000000.000"), "$GPGGA,000001.000,4500.0000,N*00", "garbage",
                                 with_checksum("GPGSV,1,1,00"), "$GPGGA,0000", with_checksum("PLRM,1")});
  ParseOptions opts;
  opts.reference_time = parse_iso8601("2020-04-17T00:00:00Z");
  const auto batch = parse_segment(lines, opts);
  EXPECT_EQ(batch.gps.size(), 1u);
  EXPECT_EQ(batch.quarantined, 1u);
  EXPECT_EQ(batch.unparsed, 1u);
  ASSERT_EQ(batch.errors.size(), 3u);
  EXPECT_EQ(batch.errors[0].line_number, 2u);
  EXPECT_EQ(batch.errors[0].reason, "invalid checksum");
  EXPECT_EQ(batch.errors[2].store, "P_LRM");
}

TEST(ParseSegment, RegistryAcceptsNewGrammar) {
  auto registry = ParserRegistry::defaults();
  registry.add_loran("P_XYZ", [](std::span<const std::string_view> f, DateContext& ctx) {
    LoranMeasurement m;
    m.gri = 7499;
    m.timestamp = resolve_timestamp(parse_time_of_day(f[1]), ctx);
    return m;
  });
  ParseOptions opts;
  opts.reference_time = parse_iso8601("2020-04-17T00:00:00Z");
  const auto batch = parse_segment(classified({"$PXYZ,010203"}), opts, registry);
  ASSERT_EQ(batch.loran.size(), 1u);
  EXPECT_EQ(batch.loran[0].gri, 7499);
}

TEST(ParseSegment, ErrorFileFormat) {
  loranrec::testing::TempDir dir;
  const std::vector<ParseErrorEntry> errors{{7, "GPGGA", "field_count: a, b"}};
  write_parse_errors(dir / "e.csv", errors);
  EXPECT_EQ(read_file(dir / "e.csv"), "line_number,store,reason\n7,GPGGA,field_count: a; b\n");
}
