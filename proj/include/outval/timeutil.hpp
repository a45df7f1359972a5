#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace outval
{

using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SS` with an optional `Z` or `±HH:MM` suffix
/// (a space is accepted in place of `T`). Naive times are taken as UTC.
std::optional<Timestamp> parse_iso8601(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_iso8601(Timestamp t);

/// Hour of day in [0, 24) after shifting by a whole-hour UTC offset.
int local_hour(Timestamp t, int utc_offset_hours);

}  // namespace outval
