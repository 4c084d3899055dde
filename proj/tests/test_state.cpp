#include <gtest/gtest.h>

#include "loranrec/error.hpp"
#include "loranrec/orchestrate/state.hpp"
#include "test_util.hpp"

using namespace loranrec;
using loranrec::testing::TempDir;

namespace {

SegmentEntry entry(const std::string& name) {
  SegmentEntry e;
  e.session_id = "S";
  e.segment = name;
  e.open_time = parse_iso8601("2020-04-17T00:00:00Z");
  return e;
}

}  // namespace

TEST(StateStore, PersistsEveryTransition) {
  TempDir dir;
  {
    StateStore store(dir.path());
    store.add_session("S");
    store.add_segment(entry("a.log"));
    store.add_segment(entry("a.log"));
    store.advance("S", "a.log", Stage::kClassified);
  }
  StateStore reopened(dir.path());
  const auto st = reopened.snapshot();
  ASSERT_EQ(st.segments.size(), 1u);
  EXPECT_EQ(st.segments[0].stage, Stage::kClassified);
  EXPECT_EQ(st.segments[0].open_time, parse_iso8601("2020-04-17T00:00:00Z"));
  EXPECT_EQ(st.sessions, std::vector<std::string>{"S"});
}

TEST(StateStore, StagesOnlyMoveForward) {
  TempDir dir;
  StateStore store(dir.path());
  store.add_segment(entry("a.log"));
  store.advance("S", "a.log", Stage::kConverted);
  EXPECT_THROW(store.advance("S", "a.log", Stage::kClassified), Error);
  EXPECT_THROW(store.advance("S", "a.log", Stage::kConverted), Error);
  EXPECT_THROW(store.advance("S", "missing.log", Stage::kConverted), Error);
}

TEST(StateStore, FlagAndClear) {
  TempDir dir;
  StateStore store(dir.path());
  store.add_segment(entry("a.log"));
  store.flag("S", "a.log", "converter failed");
  EXPECT_TRUE(StateStore(dir.path()).snapshot().segments[0].flagged);
  EXPECT_EQ(store.snapshot().segments[0].flag_reason, "converter failed");
  store.clear_flag("S", "a.log");
  EXPECT_FALSE(StateStore(dir.path()).snapshot().segments[0].flagged);
}

TEST(StateStore, CorruptFileRefusesToLoad) {
  TempDir dir;
  write_file_atomic(dir / "state.json", "{\"segments\": [tru");
  EXPECT_THROW(StateStore(dir.path()), ConfigError);
  write_file_atomic(dir / "state.json", "{\"sessions\": [], \"segments\": [{\"stage\": \"weird\"}]}");
  EXPECT_THROW(StateStore(dir.path()), ConfigError);
}
