#include "loranrec/orchestrate/rotation.hpp"

#include "loranrec/error.hpp"

namespace loranrec {

RotationPolicy RotationPolicy::parse(std::string_view text) {
  if (text == "utc-midnight") return {};
  RotationPolicy p{RotationMode::kFixedInterval, parse_duration(text)};
  p.validate();
  return p;
}

std::string RotationPolicy::to_string() const {
  return mode == RotationMode::kUtcMidnight ? "utc-midnight" : format_duration(interval);
}

void RotationPolicy::validate() const {
  if (mode == RotationMode::kFixedInterval && interval <= Millis::zero()) {
    throw ConfigError("rotation interval must be positive");
  }
}

UtcInstant next_boundary(UtcInstant now, const RotationPolicy& policy, UtcInstant session_start) {
  if (policy.mode == RotationMode::kUtcMidnight) {
    return UtcInstant{std::chrono::floor<std::chrono::days>(now)} + kDay;
  }
  policy.validate();
  const auto elapsed = (now - session_start).count();
  const auto step = policy.interval.count();
  // floor division so that instants before the session start land on the lattice too
  auto k = elapsed / step;
  if (elapsed % step != 0 && elapsed < 0) --k;
  return session_start + Millis((k + 1) * step);
}

}  // namespace loranrec
