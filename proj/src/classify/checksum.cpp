#include "loranrec/classify/checksum.hpp"

#include "loranrec/error.hpp"

namespace loranrec {
namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

std::string to_string(ChecksumStatus s) {
  switch (s) {
    case ChecksumStatus::kValid: return "valid";
    case ChecksumStatus::kInvalid: return "invalid";
    case ChecksumStatus::kAbsent: return "absent";
  }
  return "absent";
}

ChecksumStatus checksum_status_from_string(std::string_view s) {
  if (s == "valid") return ChecksumStatus::kValid;
  if (s == "invalid") return ChecksumStatus::kInvalid;
  if (s == "absent") return ChecksumStatus::kAbsent;
  throw ConfigError("unknown checksum status '" + std::string(s) + "'");
}

std::uint8_t xor_checksum(std::string_view body) {
  std::uint8_t sum = 0;
  for (char c : body) sum ^= static_cast<std::uint8_t>(c);
  return sum;
}

ChecksumStatus verify_checksum(std::string_view line) {
  const auto star = line.rfind('*');
  if (star == std::string_view::npos) return ChecksumStatus::kAbsent;
  if (line.size() - star != 3) return ChecksumStatus::kInvalid;
  const int hi = hex_value(line[star + 1]);
  const int lo = hex_value(line[star + 2]);
  const auto dollar = line.find('$');
  if (hi < 0 || lo < 0 || dollar == std::string_view::npos || dollar > star) return ChecksumStatus::kInvalid;
  const auto expected = static_cast<std::uint8_t>(hi * 16 + lo);
  return xor_checksum(line.substr(dollar + 1, star - dollar - 1)) == expected ? ChecksumStatus::kValid
                                                                               : ChecksumStatus::kInvalid;
}

std::string with_checksum(std::string_view body) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  const std::uint8_t sum = xor_checksum(body);
  std::string out;
  out.reserve(body.size() + 4);
  out += '$';
  out += body;
  out += '*';
  out += kHex[sum >> 4];
  out += kHex[sum & 0xF];
  return out;
}

}  // namespace loranrec
