#include "loranrec/simulate/scenario_source.hpp"

#include <algorithm>
#include <cstring>
#include <thread>

namespace loranrec {

ScenarioSource::ScenarioSource(std::vector<Emission> emissions, ManualClock& clock, Millis window,
                               std::optional<double> wall_factor, UtcInstant end)
    : emissions_(std::move(emissions)), clock_(&clock), window_(window), wall_factor_(wall_factor), end_(end) {
  if (window_ <= Millis{0}) window_ = Millis{1};
}

ByteSource::ReadResult ScenarioSource::read(std::span<char> buffer, Millis timeout) {
  if (next_ >= emissions_.size()) {
    if (end_ > clock_->now()) clock_->set(end_);
    return {Status::kEof, 0};
  }
  const UtcInstant first = emissions_[next_].time;
  if (wall_factor_ && *wall_factor_ > 0) {
    const auto steady_now = std::chrono::steady_clock::now();
    if (!started_) {
      started_ = true;
      origin_ = steady_now;
    }
    const std::chrono::duration<double> scenario_elapsed = first - emissions_.front().time;
    const auto due = origin_ + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                   scenario_elapsed / *wall_factor_);
    if (steady_now < due) {
      const auto wait = std::min<std::chrono::steady_clock::duration>(due - steady_now, timeout);
      std::this_thread::sleep_for(wait);
      if (std::chrono::steady_clock::now() < due) return {Status::kTimeout, 0};
    }
  }
  if (first > clock_->now()) clock_->set(first);

  const auto slot = first.time_since_epoch() / window_;
  std::size_t filled = 0;
  while (next_ < emissions_.size() && filled < buffer.size()) {
    const auto& e = emissions_[next_];
    if (e.time.time_since_epoch() / window_ != slot) break;
    const std::size_t remaining = e.bytes.size() - partial_;
    const std::size_t room = buffer.size() - filled;
    if (remaining > room && filled > 0) break;
    const std::size_t n = std::min(remaining, room);
    std::memcpy(buffer.data() + filled, e.bytes.data() + partial_, n);
    filled += n;
    partial_ += n;
    if (partial_ == e.bytes.size()) {
      partial_ = 0;
      ++next_;
    }
  }
  delivered_ += filled;
  return {Status::kData, filled};
}

}  // namespace loranrec
