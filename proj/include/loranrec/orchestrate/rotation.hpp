#pragma once

#include <string>
#include <string_view>

#include "loranrec/time.hpp"

namespace loranrec {

enum class RotationMode { kUtcMidnight, kFixedInterval };

struct RotationPolicy {
  RotationMode mode = RotationMode::kUtcMidnight;
  Millis interval = kDay;  // fixed-interval mode only

  // "utc-midnight", or a duration such as "24h" for fixed-interval mode.
  static RotationPolicy parse(std::string_view text);
  std::string to_string() const;
  void validate() const;

  bool operator==(const RotationPolicy&) const = default;
};

// First boundary strictly after `now`: the next UTC midnight, or the smallest
// session_start + k * interval that is later than `now`.
UtcInstant next_boundary(UtcInstant now, const RotationPolicy& policy, UtcInstant session_start);

}  // namespace loranrec
