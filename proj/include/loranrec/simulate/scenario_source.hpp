#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "loranrec/clock.hpp"
#include "loranrec/record/source.hpp"
#include "loranrec/simulate/generator.hpp"

namespace loranrec {

// Feeds generated emissions straight into a capture loop and drives a
// ManualClock to the scenario time of each chunk, so multi-day runs finish
// in seconds with exact rotation times. Emissions are grouped into chunks by
// `window` slots of scenario time (aligned to the epoch, so a chunk never
// spans a day boundary when the window divides a day). With a `wall_factor`,
// chunks are released no faster than scenario time divided by that factor.
class ScenarioSource final : public ByteSource {
 public:
  ScenarioSource(std::vector<Emission> emissions, ManualClock& clock, Millis window = Millis{1000},
                 std::optional<double> wall_factor = std::nullopt, UtcInstant end = {});

  ReadResult read(std::span<char> buffer, Millis timeout) override;
  std::string describe() const override { return "scenario"; }

  std::uint64_t delivered() const { return delivered_; }
  bool exhausted() const { return next_ >= emissions_.size() && partial_ == 0; }

 private:
  std::vector<Emission> emissions_;
  ManualClock* clock_;
  Millis window_;
  std::optional<double> wall_factor_;
  UtcInstant end_;
  std::size_t next_ = 0;
  std::size_t partial_ = 0;
  std::uint64_t delivered_ = 0;
  std::chrono::steady_clock::time_point origin_;
  bool started_ = false;
};

}  // namespace loranrec
