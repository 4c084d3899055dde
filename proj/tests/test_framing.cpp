#include <gtest/gtest.h>

#include "loranrec/classify/framing.hpp"

using namespace loranrec;

namespace {

// Reference framing written directly from the rule: split on LF, drop one CR
// right before each LF, keep what follows the last LF.
ExtractedLines oracle(const std::string& all) {
  ExtractedLines out;
  std::string cur;
  for (char c : all) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      out.lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.residual = cur;
  return out;
}

const std::string kCorpus = std::string("$GPGGA,1*00\r\n\r\nlone\rcr\n\n$PLRM,x\r\r\n") + '\0' + "\xff\xfe\n$tail\r";

}  // namespace

TEST(Framing, PartialTrailingLine) {
  const auto r = extract_lines("$A\r\n$B\r\n$C", "");
  EXPECT_EQ(r.lines, (std::vector<std::string>{"$A", "$B"}));
  EXPECT_EQ(r.residual, "$C");
}

TEST(Framing, NoNewBytes) {
  const auto r = extract_lines("", "xyz");
  EXPECT_TRUE(r.lines.empty());
  EXPECT_EQ(r.residual, "xyz");
}

TEST(Framing, MatchesOracleOnCorpus) {
  const auto r = extract_lines(kCorpus, "");
  const auto o = oracle(kCorpus);
  EXPECT_EQ(r.lines, o.lines);
  EXPECT_EQ(r.residual, o.residual);
}

TEST(Framing, EverySplitPointYieldsSameLines) {
  const auto whole = oracle(kCorpus);
  for (std::size_t k = 0; k <= kCorpus.size(); ++k) {
    const auto first = extract_lines(std::string_view(kCorpus).substr(0, k), "");
    const auto second = extract_lines(std::string_view(kCorpus).substr(k), first.residual);
    auto lines = first.lines;
    lines.insert(lines.end(), second.lines.begin(), second.lines.end());
    ASSERT_EQ(lines, whole.lines) << "split at " << k;
    ASSERT_EQ(second.residual, whole.residual) << "split at " << k;
  }
}

TEST(Framing, LineFramerReportsOffsetsAndTail) {
  LineFramer framer;
  std::vector<std::pair<std::string, std::uint64_t>> seen;
  auto sink = [&](std::string_view line, std::uint64_t off) { seen.emplace_back(std::string(line), off); };
  framer.feed("ab\r\ncd", sink);
  framer.feed("\nef", sink);
  EXPECT_TRUE(framer.finish(sink));
  ASSERT_EQ(seen.size(), 3u);
  EXPECT_EQ(seen[0], (std::pair<std::string, std::uint64_t>{"ab", 0}));
  EXPECT_EQ(seen[1], (std::pair<std::string, std::uint64_t>{"cd", 4}));
  EXPECT_EQ(seen[2], (std::pair<std::string, std::uint64_t>{"ef", 7}));
  EXPECT_EQ(framer.consumed(), 9u);
}
