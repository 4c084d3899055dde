#include "loranrec/record/endpoint.hpp"

#include <charconv>
#include <cstdint>

#include "loranrec/error.hpp"

namespace loranrec {

SourceEndpoint SourceEndpoint::parse(std::string_view text, std::optional<double> replay_speed) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("source '" + std::string(text) + "' must be <serial|tcp|file>:<address>");
  }
  const auto kind = text.substr(0, colon);
  SourceEndpoint ep;
  ep.address = std::string(text.substr(colon + 1));
  if (kind == "serial") {
    ep.kind = SourceKind::kSerial;
  } else if (kind == "tcp") {
    ep.kind = SourceKind::kTcp;
  } else if (kind == "file") {
    ep.kind = SourceKind::kFileReplay;
    ep.replay_speed = replay_speed.value_or(0.0);
  } else {
    throw ConfigError("unknown source kind '" + std::string(kind) + "'");
  }
  if (ep.kind != SourceKind::kFileReplay && replay_speed) {
    throw ConfigError("replay speed applies to file replay sources only");
  }
  ep.validate();
  return ep;
}

std::string SourceEndpoint::to_string() const {
  switch (kind) {
    case SourceKind::kSerial: return "serial:" + address;
    case SourceKind::kTcp: return "tcp:" + address;
    case SourceKind::kFileReplay: return "file:" + address;
  }
  return address;
}

std::pair<std::string, std::uint16_t> SourceEndpoint::host_port() const {
  const auto colon = address.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == address.size()) {
    throw ConfigError("tcp address '" + address + "' must be host:port");
  }
  unsigned port = 0;
  const auto digits = std::string_view(address).substr(colon + 1);
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc{} || p != digits.data() + digits.size() || port == 0 || port > 65535) {
    throw ConfigError("tcp address '" + address + "' has an invalid port");
  }
  return {address.substr(0, colon), static_cast<std::uint16_t>(port)};
}

void SourceEndpoint::validate() const {
  if (address.empty()) throw ConfigError("source address is empty");
  switch (kind) {
    case SourceKind::kTcp:
      host_port();
      break;
    case SourceKind::kSerial:
      if (address.front() != '/') throw ConfigError("serial device path must be absolute: '" + address + "'");
      break;
    case SourceKind::kFileReplay:
      if (replay_speed && *replay_speed < 0) throw ConfigError("replay speed must be >= 0");
      break;
  }
  if (kind != SourceKind::kFileReplay && replay_speed) {
    throw ConfigError("replay speed applies to file replay sources only");
  }
}

}  // namespace loranrec
