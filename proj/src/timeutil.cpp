#include "ssv/timeutil.hpp"

#include <cstdio>

#include "ssv/common.hpp"

namespace ssv::timeutil {
namespace {

bool all_digits(const std::string& s, std::size_t pos, std::size_t len) {
  if (pos + len > s.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

int digits_at(const std::string& s, std::size_t pos, std::size_t len) {
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) v = v * 10 + (s[i] - '0');
  return v;
}

unsigned days_in_month(int y, unsigned m) {
  static const unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29u : 28u;
  }
  return kDays[m - 1];
}

}  // namespace

// Howard Hinnant's public-domain civil-date algorithms.
std::int64_t days_from_civil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y = static_cast<int>(yy + (m <= 2));
}

std::int64_t parse_iso8601_utc(const std::string& s) {
  std::string t = s;
  if (!t.empty() && t.back() == 'Z') t.pop_back();

  const bool date_only = t.size() == 10;
  const bool date_time = t.size() == 19;
  if (!date_only && !date_time)
    throw parse_error("bad timestamp '" + s +
                      "': expected YYYY-MM-DD or YYYY-MM-DDTHH:MM:SS[Z]");

  if (!all_digits(t, 0, 4) || t[4] != '-' || !all_digits(t, 5, 2) ||
      t[7] != '-' || !all_digits(t, 8, 2))
    throw parse_error("bad timestamp '" + s + "': malformed date");

  const int y = digits_at(t, 0, 4);
  const unsigned m = static_cast<unsigned>(digits_at(t, 5, 2));
  const unsigned d = static_cast<unsigned>(digits_at(t, 8, 2));
  if (m < 1 || m > 12)
    throw parse_error("bad timestamp '" + s + "': month out of range");
  if (d < 1 || d > days_in_month(y, m))
    throw parse_error("bad timestamp '" + s + "': day out of range");

  int hh = 0, mm = 0, ss = 0;
  if (date_time) {
    if (t[10] != 'T' || !all_digits(t, 11, 2) || t[13] != ':' ||
        !all_digits(t, 14, 2) || t[16] != ':' || !all_digits(t, 17, 2))
      throw parse_error("bad timestamp '" + s + "': malformed time");
    hh = digits_at(t, 11, 2);
    mm = digits_at(t, 14, 2);
    ss = digits_at(t, 17, 2);
    if (hh > 23 || mm > 59 || ss > 59)
      throw parse_error("bad timestamp '" + s + "': time out of range");
  }

  return days_from_civil(y, m, d) * 86400 + hh * 3600 + mm * 60 + ss;
}

std::string format_iso8601_utc(std::int64_t epoch_seconds) {
  const std::int64_t days = floor_div(epoch_seconds, 86400);
  std::int64_t rem = epoch_seconds - days * 86400;
  int y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  const int hh = static_cast<int>(rem / 3600);
  rem %= 3600;
  const int mm = static_cast<int>(rem / 60);
  const int ss = static_cast<int>(rem % 60);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", y, m, d,
                hh, mm, ss);
  return buf;
}

}  // namespace ssv::timeutil
