#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace gridflex {

using TimePoint = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM[:SS][.fff](Z|+HH:MM|+HHMM|+HH)`.
/// Returns nullopt when the text is not a timestamp at all; throws InputError
/// when it looks like one but carries no usable UTC offset.
[[nodiscard]] std::optional<TimePoint> parse_timestamp(std::string_view text);

/// `2024-01-01T00:00:00Z`
[[nodiscard]] std::string format_utc(TimePoint t);

/// Calendar year of `t` observed at a fixed UTC offset.
[[nodiscard]] int calendar_year(TimePoint t, std::chrono::minutes offset = std::chrono::minutes{0});

/// Hours in the calendar year `year` (8760 or 8784).
[[nodiscard]] double hours_in_year(int year);

/// Parses `+01:00`, `-0530`, `Z`; throws InputError otherwise.
[[nodiscard]] std::chrono::minutes parse_utc_offset(std::string_view text);

[[nodiscard]] inline double hours_between(TimePoint from, TimePoint to) {
  return std::chrono::duration<double, std::ratio<3600>>(to - from).count();
}

}  // namespace gridflex
