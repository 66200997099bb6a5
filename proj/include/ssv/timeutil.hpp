#pragma once

#include <cstdint>
#include <string>

namespace ssv::timeutil {

/// Floor division (quotient rounded toward negative infinity), so epoch
/// bucketing behaves uniformly on both sides of 1970.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int y, unsigned m, unsigned d);

/// Inverse of days_from_civil.
void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d);

/// Parse "YYYY-MM-DD" or "YYYY-MM-DDTHH:MM:SS" with optional trailing "Z"
/// into seconds since the Unix epoch (UTC). Throws ssv::parse_error on any
/// malformed or out-of-range field.
std::int64_t parse_iso8601_utc(const std::string& s);

/// Format epoch seconds as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601_utc(std::int64_t epoch_seconds);

}  // namespace ssv::timeutil
