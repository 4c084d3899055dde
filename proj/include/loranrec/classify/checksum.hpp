#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace loranrec {

enum class ChecksumStatus { kValid, kInvalid, kAbsent };

std::string to_string(ChecksumStatus s);
ChecksumStatus checksum_status_from_string(std::string_view s);

// XOR of every byte in `body`.
std::uint8_t xor_checksum(std::string_view body);

// Absent when the line has no `*`. Otherwise the text after the last `*` must
// be exactly two hex digits equal (case-insensitively) to the XOR of the bytes
// strictly between the first `$` and that `*`; anything else is invalid.
ChecksumStatus verify_checksum(std::string_view line);

// "$" + body + "*" + two uppercase hex digits.
std::string with_checksum(std::string_view body);

}  // namespace loranrec
