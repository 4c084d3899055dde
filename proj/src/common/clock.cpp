#include "loranrec/clock.hpp"

#include "loranrec/error.hpp"

namespace loranrec {

UtcInstant SystemClock::now() const {
  return std::chrono::time_point_cast<Millis>(std::chrono::system_clock::now());
}

AcceleratedClock::AcceleratedClock(UtcInstant start, double factor)
    : start_(start), factor_(factor), origin_(std::chrono::steady_clock::now()) {
  if (!(factor > 0)) throw ConfigError("clock acceleration factor must be positive");
}

UtcInstant AcceleratedClock::now() const {
  const std::chrono::duration<double, std::milli> wall = std::chrono::steady_clock::now() - origin_;
  return start_ + Millis(static_cast<Millis::rep>(wall.count() * factor_));
}

}  // namespace loranrec
