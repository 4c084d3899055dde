#pragma once

#include <atomic>
#include <chrono>

#include "loranrec/time.hpp"

namespace loranrec {

// All scheduling consults a Clock so that multi-day rotation cycles can be
// exercised in milliseconds.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual UtcInstant now() const = 0;
};

class SystemClock final : public Clock {
 public:
  UtcInstant now() const override;
};

// Set explicitly by its owner (tests, or a source that drives scenario time).
class ManualClock final : public Clock {
 public:
  explicit ManualClock(UtcInstant start) : ms_(start.time_since_epoch().count()) {}

  UtcInstant now() const override { return UtcInstant{Millis{ms_.load(std::memory_order_acquire)}}; }
  void set(UtcInstant t) { ms_.store(t.time_since_epoch().count(), std::memory_order_release); }
  void advance(Millis d) { ms_.fetch_add(d.count(), std::memory_order_acq_rel); }

 private:
  std::atomic<Millis::rep> ms_;
};

// Scenario time that runs `factor` times faster than wall time from construction.
class AcceleratedClock final : public Clock {
 public:
  AcceleratedClock(UtcInstant start, double factor);
  UtcInstant now() const override;

 private:
  UtcInstant start_;
  double factor_;
  std::chrono::steady_clock::time_point origin_;
};

}  // namespace loranrec
