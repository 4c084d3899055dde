#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>

namespace loranrec::log {

enum class Level { kDebug = 0, kInfo = 1, kWarn = 2, kError = 3, kOff = 4 };

// Initial level comes from LORANREC_LOG_LEVEL (debug|info|warn|error|off), default info.
void set_level(Level level);
Level level();

using Field = std::pair<std::string_view, std::string>;

// One line per event on stderr: `ts=... level=info event=<name> key=value ...`.
void emit(Level level, std::string_view event, std::initializer_list<Field> fields = {});

inline void info(std::string_view event, std::initializer_list<Field> fields = {}) { emit(Level::kInfo, event, fields); }
inline void warn(std::string_view event, std::initializer_list<Field> fields = {}) { emit(Level::kWarn, event, fields); }
inline void error(std::string_view event, std::initializer_list<Field> fields = {}) { emit(Level::kError, event, fields); }
inline void debug(std::string_view event, std::initializer_list<Field> fields = {}) { emit(Level::kDebug, event, fields); }

}  // namespace loranrec::log
