#include "loranrec/parse/date_context.hpp"

#include <array>

namespace loranrec {

using std::chrono::days;
using std::chrono::hours;
using std::chrono::sys_days;

std::string to_string(DateSource s) {
  switch (s) {
    case DateSource::kRmc: return "RMC";
    case DateSource::kZda: return "ZDA";
    case DateSource::kConfiguredStartDate: return "configured-start-date";
  }
  return "configured-start-date";
}

UtcInstant resolve_timestamp(Millis tod, DateContext& ctx) {
  if (ctx.last_tod && tod < *ctx.last_tod - hours(12)) {
    ctx.current_date = Date{sys_days{ctx.current_date} + days(1)};
  }
  ctx.last_tod = tod;
  return make_instant(ctx.current_date, tod);
}

DateContext seed_context(UtcInstant reference, Millis first_tod, DateSource source) {
  const sys_days ref_day = std::chrono::floor<days>(reference);
  const std::array<sys_days, 3> candidates{ref_day - days(1), ref_day, ref_day + days(1)};
  sys_days best = ref_day;
  Millis best_distance = Millis::max();
  for (const auto day : candidates) {
    const auto d = UtcInstant{day} + first_tod - reference;
    const Millis distance = d < Millis::zero() ? -d : d;
    if (distance <= best_distance) {  // ties go to the later day: records follow the reference
      best_distance = distance;
      best = day;
    }
  }
  return DateContext{Date{best}, std::nullopt, source};
}

}  // namespace loranrec
