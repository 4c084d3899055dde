#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace loranrec {

enum class MessageKind { kNmeaStandard, kNmeaProprietary, kUnknown };

struct MessageClass {
  MessageKind kind = MessageKind::kUnknown;
  std::string talker;      // standard only, e.g. "GP"
  std::string sentence;    // standard only, e.g. "GGA"
  std::string vendor_tag;  // proprietary only, e.g. "LRM"

  static MessageClass standard(std::string talker, std::string sentence) {
    return {MessageKind::kNmeaStandard, std::move(talker), std::move(sentence), {}};
  }
  static MessageClass proprietary(std::string vendor_tag) {
    return {MessageKind::kNmeaProprietary, {}, {}, std::move(vendor_tag)};
  }
  static MessageClass unknown() { return {}; }

  // Per-class store name: "GPGGA", "P_LRM"; empty for unknown.
  std::string store_name() const;

  auto operator<=>(const MessageClass&) const = default;
};

// Reads the header only. `$P<alnum...>` is proprietary (the NMEA "P" talker
// is reserved), `$` + 5 uppercase letters followed by `,`, `*` or end of line
// is standard, anything else is unknown. Never fails.
MessageClass classify_line(std::string_view line);

}  // namespace loranrec
