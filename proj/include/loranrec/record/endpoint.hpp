#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace loranrec {

enum class SourceKind { kSerial, kTcp, kFileReplay };

// Where raw receiver bytes come from. Text form is `<kind>:<address>`, e.g.
// `serial:/dev/ttyUSB0`, `tcp:localhost:4001`, `file:./raw_20200417T000000Z.log`.
struct SourceEndpoint {
  SourceKind kind = SourceKind::kTcp;
  std::string address;
  // file replay only; 0 means as fast as possible
  std::optional<double> replay_speed;

  static SourceEndpoint parse(std::string_view text, std::optional<double> replay_speed = std::nullopt);
  std::string to_string() const;
  // Throws ConfigError when the address does not fit the kind.
  void validate() const;

  // Host and port of a TCP endpoint.
  std::pair<std::string, std::uint16_t> host_port() const;
};

}  // namespace loranrec
