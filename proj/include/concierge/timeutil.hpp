#pragma once

#include "concierge/types.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace concierge::timeutil {

// Accepts RFC 3339 ("2021-03-01T12:00:00Z", offsets and fractional
// seconds allowed, fraction truncated) or a plain integer of epoch seconds.
std::optional<Timestamp> parse(std::string_view text);

std::string format_rfc3339(Timestamp ts);
std::string format_date(Timestamp ts);  // YYYY-MM-DD

Timestamp floor_day(Timestamp ts);
Timestamp floor_week(Timestamp ts);   // Monday 00:00 UTC
Timestamp floor_month(Timestamp ts);
Timestamp next_month(Timestamp month_start);

Timestamp now();

}  // namespace concierge::timeutil
