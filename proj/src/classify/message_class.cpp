#include "loranrec/classify/message_class.hpp"

namespace loranrec {
namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool ends_header(std::string_view line, std::size_t pos) {
  return pos == line.size() || line[pos] == ',' || line[pos] == '*';
}

}  // namespace

std::string MessageClass::store_name() const {
  switch (kind) {
    case MessageKind::kNmeaStandard: return talker + sentence;
    case MessageKind::kNmeaProprietary: return "P_" + vendor_tag;
    case MessageKind::kUnknown: break;
  }
  return {};
}

MessageClass classify_line(std::string_view line) {
  if (line.size() < 2 || line[0] != '$') return MessageClass::unknown();
  if (line[1] == 'P') {
    std::size_t end = 2;
    while (end < line.size() && (is_upper(line[end]) || is_digit(line[end]))) ++end;
    if (end == 2 || !ends_header(line, end)) return MessageClass::unknown();
    return MessageClass::proprietary(std::string(line.substr(2, end - 2)));
  }
  if (line.size() < 6) return MessageClass::unknown();
  for (std::size_t i = 1; i <= 5; ++i) {
    if (!is_upper(line[i])) return MessageClass::unknown();
  }
  if (!ends_header(line, 6)) return MessageClass::unknown();
  return MessageClass::standard(std::string(line.substr(1, 2)), std::string(line.substr(3, 3)));
}

}  // namespace loranrec
