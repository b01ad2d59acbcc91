#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace volkit {

/// Calendar day. Arithmetic in whole days via std::chrono::days.
using Date = std::chrono::sys_days;

/// Strict YYYY-MM-DD parse; nullopt on anything else (including impossible days).
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

/// Literal helper for tests and defaults.
Date make_date(int year, unsigned month, unsigned day);

inline long days_between(Date from, Date to) { return (to - from).count(); }

}  // namespace volkit
