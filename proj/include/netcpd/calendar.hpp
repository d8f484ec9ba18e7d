#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace netcpd {

using Date = std::chrono::sys_days;

/// Parses a strict `YYYY-MM-DD` date. Throws std::invalid_argument otherwise.
Date parse_iso_date(std::string_view text);

std::string format_iso_date(Date date);

/// The `count`-th weekday on or after `start` (count = 0 gives the first one).
Date nth_weekday_from(Date start, std::size_t count);

}  // namespace netcpd
