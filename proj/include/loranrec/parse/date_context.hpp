#pragma once

#include <optional>
#include <string>

#include "loranrec/time.hpp"

namespace loranrec {

enum class DateSource { kRmc, kZda, kConfiguredStartDate };

std::string to_string(DateSource s);

// GGA and $PLRM carry time of day only; the calendar date is threaded through
// the segment from date sentences. current_date never moves backwards.
struct DateContext {
  Date current_date;
  std::optional<Millis> last_tod;
  DateSource source = DateSource::kConfiguredStartDate;
};

// Combines the context date with `tod`. A time of day more than 12 h earlier
// than the previous one is a midnight rollover and advances the date first.
UtcInstant resolve_timestamp(Millis tod, DateContext& ctx);

// Initial context for a segment whose first timed line carries `first_tod`:
// picks the date (reference day, the day before or the day after) that puts
// the line closest to `reference`.
DateContext seed_context(UtcInstant reference, Millis first_tod, DateSource source);

}  // namespace loranrec
