#include "loranrec/orchestrate/state.hpp"

#include <algorithm>

#include "loranrec/error.hpp"
#include "loranrec/fs_util.hpp"

namespace loranrec {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(Stage s) {
  switch (s) {
    case Stage::kRecorded: return "recorded";
    case Stage::kClassified: return "classified";
    case Stage::kConverted: return "converted";
  }
  return "recorded";
}

Stage stage_from_string(std::string_view s) {
  if (s == "recorded") return Stage::kRecorded;
  if (s == "classified") return Stage::kClassified;
  if (s == "converted") return Stage::kConverted;
  throw ConfigError("unknown stage '" + std::string(s) + "'");
}

ordered_json PipelineState::to_json() const {
  ordered_json j;
  j["sessions"] = sessions;
  j["segments"] = ordered_json::array();
  for (const auto& s : segments) {
    j["segments"].push_back({{"session_id", s.session_id},
                             {"segment", s.segment},
                             {"open_time", s.open_time ? ordered_json(format_iso8601(*s.open_time)) : ordered_json()},
                             {"stage", to_string(s.stage)},
                             {"flagged", s.flagged},
                             {"flag_reason", s.flag_reason}});
  }
  return j;
}

PipelineState PipelineState::from_json(const json& j) {
  PipelineState st;
  try {
    st.sessions = j.at("sessions").get<std::vector<std::string>>();
    for (const auto& e : j.at("segments")) {
      SegmentEntry s;
      s.session_id = e.at("session_id").get<std::string>();
      s.segment = e.at("segment").get<std::string>();
      if (!e.at("open_time").is_null()) s.open_time = parse_iso8601(e.at("open_time").get<std::string>());
      s.stage = stage_from_string(e.at("stage").get<std::string>());
      s.flagged = e.at("flagged").get<bool>();
      s.flag_reason = e.at("flag_reason").get<std::string>();
      st.segments.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed pipeline state: ") + e.what());
  }
  return st;
}

StateStore::StateStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw IoError("cannot create state directory '" + root_.string() + "': " + ec.message());
  const auto path = root_ / kStateFile;
  if (fs::exists(path)) {
    try {
      state_ = PipelineState::from_json(json::parse(read_file(path)));
    } catch (const json::exception& e) {
      throw ConfigError("corrupt state file '" + path.string() + "': " + e.what());
    } catch (const ConfigError& e) {
      throw ConfigError("corrupt state file '" + path.string() + "': " + e.what());
    }
  } else {
    save();
  }
}

PipelineState StateStore::snapshot() const {
  std::lock_guard lock(mu_);
  return state_;
}

void StateStore::save() const { write_file_atomic(root_ / kStateFile, state_.to_json().dump(2) + "\n"); }

void StateStore::add_session(const std::string& session_id) {
  std::lock_guard lock(mu_);
  if (std::find(state_.sessions.begin(), state_.sessions.end(), session_id) != state_.sessions.end()) return;
  state_.sessions.push_back(session_id);
  save();
}

void StateStore::add_segment(const SegmentEntry& entry) {
  std::lock_guard lock(mu_);
  for (const auto& s : state_.segments) {
    if (s.session_id == entry.session_id && s.segment == entry.segment) return;
  }
  state_.segments.push_back(entry);
  save();
}

SegmentEntry& StateStore::find(const std::string& session_id, const std::string& segment) {
  for (auto& s : state_.segments) {
    if (s.session_id == session_id && s.segment == segment) return s;
  }
  throw Error("segment " + session_id + "/" + segment + " is not tracked");
}

void StateStore::advance(const std::string& session_id, const std::string& segment, Stage stage) {
  std::lock_guard lock(mu_);
  auto& s = find(session_id, segment);
  if (stage <= s.stage) {
    throw Error("stage of " + segment + " cannot move from " + to_string(s.stage) + " to " + to_string(stage));
  }
  s.stage = stage;
  save();
}

void StateStore::flag(const std::string& session_id, const std::string& segment, const std::string& reason) {
  std::lock_guard lock(mu_);
  auto& s = find(session_id, segment);
  s.flagged = true;
  s.flag_reason = reason;
  save();
}

void StateStore::clear_flag(const std::string& session_id, const std::string& segment) {
  std::lock_guard lock(mu_);
  auto& s = find(session_id, segment);
  if (!s.flagged) return;
  s.flagged = false;
  s.flag_reason.clear();
  save();
}

}  // namespace loranrec
