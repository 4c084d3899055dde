#include "loranrec/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <mutex>

#include "loranrec/clock.hpp"

namespace loranrec::log {
namespace {

Level initial_level() {
  const char* env = std::getenv("LORANREC_LOG_LEVEL");
  if (env == nullptr) return Level::kInfo;
  const std::string_view v(env);
  if (v == "debug") return Level::kDebug;
  if (v == "warn") return Level::kWarn;
  if (v == "error") return Level::kError;
  if (v == "off") return Level::kOff;
  return Level::kInfo;
}

std::atomic<Level>& current() {
  static std::atomic<Level> lvl{initial_level()};
  return lvl;
}

std::string_view name(Level l) {
  switch (l) {
    case Level::kDebug: return "debug";
    case Level::kInfo: return "info";
    case Level::kWarn: return "warn";
    case Level::kError: return "error";
    case Level::kOff: break;
  }
  return "off";
}

bool needs_quoting(std::string_view v) {
  if (v.empty()) return true;
  for (char c : v) {
    if (c == ' ' || c == '"' || c == '=' || static_cast<unsigned char>(c) < 0x20) return true;
  }
  return false;
}

}  // namespace

void set_level(Level level) { current().store(level); }
Level level() { return current().load(); }

void emit(Level lvl, std::string_view event, std::initializer_list<Field> fields) {
  if (lvl < current().load() || current().load() == Level::kOff) return;
  std::string line = "ts=" + format_iso8601(SystemClock{}.now());
  line += " level=";
  line += name(lvl);
  line += " event=";
  line += event;
  for (const auto& [key, value] : fields) {
    line += ' ';
    line += key;
    line += '=';
    if (needs_quoting(value)) {
      line += '"';
      for (char c : value) {
        if (c == '"' || c == '\\') line += '\\';
        line += (static_cast<unsigned char>(c) < 0x20) ? ' ' : c;
      }
      line += '"';
    } else {
      line += value;
    }
  }
  line += '\n';
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::cerr << line << std::flush;
}

}  // namespace loranrec::log
