// Copyright 2026 The Tempora Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TEMPORA_CALENDAR_HPP
#define TEMPORA_CALENDAR_HPP

#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "tempora/errors.hpp"

// Deterministic calendar arithmetic on civil dates: day differences,
// relative-delta addition with month-end clamping, weekday search, week and
// month ranges, and Allen's thirteen interval relations. Everything here is a
// pure function over immutable values; no clocks, no time zones.

namespace tempora {

// ISO weekday numbering: Monday = 1 .. Sunday = 7.
enum class Weekday : int {
  monday = 1,
  tuesday = 2,
  wednesday = 3,
  thursday = 4,
  friday = 5,
  saturday = 6,
  sunday = 7,
};

inline const char* weekday_code(Weekday w) {
  switch (w) {
    case Weekday::monday: return "MO";
    case Weekday::tuesday: return "TU";
    case Weekday::wednesday: return "WE";
    case Weekday::thursday: return "TH";
    case Weekday::friday: return "FR";
    case Weekday::saturday: return "SA";
    case Weekday::sunday: return "SU";
  }
  return "??";
}

inline std::optional<Weekday> weekday_from_code(std::string_view code) {
  static constexpr std::array<std::string_view, 7> codes = {
      "MO", "TU", "WE", "TH", "FR", "SA", "SU"};
  for (int i = 0; i < 7; ++i) {
    if (codes[static_cast<size_t>(i)] == code) return Weekday{i + 1};
  }
  return std::nullopt;
}

inline bool is_leap_year(int year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

inline int days_in_month(int year, int month) {
  static constexpr std::array<int, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                  31, 31, 30, 31, 30, 31};
  if (month == 2 && is_leap_year(year)) return 29;
  return lengths[static_cast<size_t>(month - 1)];
}

// Supported range: proleptic Gregorian, years 1..9999.
inline constexpr int kMinYear = 1;
inline constexpr int kMaxYear = 9999;

inline bool is_valid_date(int year, int month, int day) {
  if (year < kMinYear || year > kMaxYear) return false;
  if (month < 1 || month > 12) return false;
  if (day < 1 || day > days_in_month(year, month)) return false;
  return true;
}

// A civil calendar date. Field order makes the defaulted comparison
// lexicographic, which coincides with chronological order for valid dates.
struct CalDate {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const CalDate&) const = default;
};

inline CalDate make_date(int year, int month, int day) {
  if (!is_valid_date(year, month, day)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "invalid date %d-%02d-%02d", year, month, day);
    throw DomainError(buf);
  }
  return CalDate{year, month, day};
}

// Days since 1970-01-01 (negative before). Howard Hinnant's days-from-civil.
inline std::int64_t day_number(const CalDate& d) {
  std::int64_t y = d.year;
  const int m = d.month;
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy =
      static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d.day - 1);
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline CalDate from_day_number(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp + (mp < 10 ? 3 : -9);
  const int year = static_cast<int>(y + (m <= 2));
  if (year < kMinYear || year > kMaxYear) {
    throw DomainError("date outside supported years 1-9999");
  }
  return CalDate{year, static_cast<int>(m), static_cast<int>(d)};
}

inline Weekday weekday_of(const CalDate& d) {
  // 1970-01-01 was a Thursday (ISO 4).
  std::int64_t w = (day_number(d) + 3) % 7;
  if (w < 0) w += 7;
  return Weekday{static_cast<int>(w) + 1};
}

inline std::string to_iso(const CalDate& d) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

inline int parse_int_field(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

}  // namespace detail

// Accepts ISO-8601 "YYYY-MM-DD" or US "MM/DD/YYYY". Output is always ISO.
inline CalDate parse_date(std::string_view text) {
  auto split3 = [](std::string_view s, char sep,
                   std::string_view out[3]) -> bool {
    size_t a = s.find(sep);
    if (a == std::string_view::npos) return false;
    size_t b = s.find(sep, a + 1);
    if (b == std::string_view::npos) return false;
    if (s.find(sep, b + 1) != std::string_view::npos) return false;
    out[0] = s.substr(0, a);
    out[1] = s.substr(a + 1, b - a - 1);
    out[2] = s.substr(b + 1);
    return true;
  };

  std::string_view f[3];
  int year, month, day;
  if (split3(text, '-', f)) {
    if (f[0].size() != 4 || f[1].empty() || f[1].size() > 2 || f[2].empty() ||
        f[2].size() > 2 || !detail::all_digits(f[0]) ||
        !detail::all_digits(f[1]) || !detail::all_digits(f[2])) {
      throw FormatError("unrecognized date format: '" + std::string(text) + "'");
    }
    year = detail::parse_int_field(f[0]);
    month = detail::parse_int_field(f[1]);
    day = detail::parse_int_field(f[2]);
  } else if (split3(text, '/', f)) {
    if (f[0].empty() || f[0].size() > 2 || f[1].empty() || f[1].size() > 2 ||
        f[2].size() != 4 || !detail::all_digits(f[0]) ||
        !detail::all_digits(f[1]) || !detail::all_digits(f[2])) {
      throw FormatError("unrecognized date format: '" + std::string(text) + "'");
    }
    month = detail::parse_int_field(f[0]);
    day = detail::parse_int_field(f[1]);
    year = detail::parse_int_field(f[2]);
  } else {
    throw FormatError("unrecognized date format: '" + std::string(text) + "'");
  }
  if (!is_valid_date(year, month, day)) {
    throw DomainError("impossible date: '" + std::string(text) + "'");
  }
  return CalDate{year, month, day};
}

// A span of time. `days` is the canonical unit; `months` and `years` are
// calendar components that never auto-convert to days (they only take effect
// through add_relative).
struct Duration {
  std::int64_t days = 0;
  int months = 0;
  int years = 0;

  bool operator==(const Duration&) const = default;

  static Duration of_days(std::int64_t n) { return Duration{n, 0, 0}; }
  static Duration of_months(int n) { return Duration{0, n, 0}; }
  static Duration of_years(int n) { return Duration{0, 0, n}; }

  bool days_only() const { return months == 0 && years == 0; }
};

inline Duration operator+(const Duration& a, const Duration& b) {
  return Duration{a.days + b.days, a.months + b.months, a.years + b.years};
}

inline Duration operator-(const Duration& a) {
  return Duration{-a.days, -a.months, -a.years};
}

inline Duration operator-(const Duration& a, const Duration& b) {
  return a + (-b);
}

inline std::string to_string(const Duration& d) {
  std::string out;
  auto piece = [&out](std::int64_t n, const char* unit) {
    if (!out.empty()) out += ' ';
    out += std::to_string(n);
    out += ' ';
    out += unit;
    if (n != 1 && n != -1) out += 's';
  };
  if (d.years != 0) piece(d.years, "year");
  if (d.months != 0) piece(d.months, "month");
  if (d.days != 0 || out.empty()) piece(d.days, "day");
  return out;
}

// Closed interval of days, start <= end.
struct DateInterval {
  CalDate start;
  CalDate end;

  bool operator==(const DateInterval&) const = default;
};

inline DateInterval make_interval(const CalDate& start, const CalDate& end) {
  if (end < start) {
    throw DomainError("interval start " + to_iso(start) + " is after end " +
                      to_iso(end));
  }
  return DateInterval{start, end};
}

inline std::string to_string(const DateInterval& iv) {
  return "[" + to_iso(iv.start) + ", " + to_iso(iv.end) + "]";
}

// b - a in days; antisymmetric by construction.
inline Duration diff_days(const CalDate& a, const CalDate& b) {
  return Duration::of_days(day_number(b) - day_number(a));
}

struct RelativeDelta {
  int years = 0;
  int months = 0;
  std::int64_t days = 0;
};

// Year and month components apply jointly, clamping the day to the target
// month's end once, then days shift exactly. Matches relativedelta:
// 2020-01-31 + 1 month = 2020-02-29.
inline CalDate add_relative(const CalDate& t, const RelativeDelta& delta) {
  std::int64_t month_index = static_cast<std::int64_t>(t.year) * 12 + (t.month - 1);
  month_index += static_cast<std::int64_t>(delta.years) * 12 + delta.months;
  const std::int64_t y = month_index >= 0 ? month_index / 12
                                          : (month_index - 11) / 12;
  const int m = static_cast<int>(month_index - y * 12) + 1;
  if (y < kMinYear || y > kMaxYear) {
    throw DomainError("add_relative result outside supported years 1-9999");
  }
  int d = t.day;
  const int cap = days_in_month(static_cast<int>(y), m);
  if (d > cap) d = cap;
  CalDate shifted{static_cast<int>(y), m, d};
  if (delta.days == 0) return shifted;
  return from_day_number(day_number(shifted) + delta.days);
}

inline CalDate add_days(const CalDate& t, std::int64_t days) {
  return from_day_number(day_number(t) + days);
}

// relativedelta weekday semantics: n=+1 is the nearest w on-or-after t
// (t itself qualifies), n=+k the k-th such; negative n mirrors backwards.
inline CalDate next_weekday(const CalDate& t, Weekday w, int n) {
  if (n == 0) throw ContractError("next_weekday ordinal must be non-zero");
  const int wd = static_cast<int>(weekday_of(t));
  const int target = static_cast<int>(w);
  if (n > 0) {
    const int ahead = (target - wd + 7) % 7;
    return add_days(t, ahead + 7L * (n - 1));
  }
  const int back = (wd - target + 7) % 7;
  return add_days(t, -back - 7L * (-n - 1));
}

enum class RangeUnit { week, month };

// week: the Monday..Sunday interval containing t. month: first..last day of
// t's month.
inline DateInterval calendar_range(const CalDate& t, RangeUnit unit) {
  if (unit == RangeUnit::week) {
    const CalDate monday = add_days(t, -(static_cast<int>(weekday_of(t)) - 1));
    return DateInterval{monday, add_days(monday, 6)};
  }
  return DateInterval{CalDate{t.year, t.month, 1},
                      CalDate{t.year, t.month, days_in_month(t.year, t.month)}};
}

inline DateInterval week_range(const CalDate& t) {
  return calendar_range(t, RangeUnit::week);
}

inline DateInterval month_range(const CalDate& t) {
  return calendar_range(t, RangeUnit::month);
}

// Allen's thirteen interval relations.
enum class AllenRelation {
  before,
  meets,
  overlaps,
  starts,
  during,
  finishes,
  equals,
  after,
  met_by,
  overlapped_by,
  started_by,
  contains,
  finished_by,
};

inline const char* to_string(AllenRelation r) {
  switch (r) {
    case AllenRelation::before: return "before";
    case AllenRelation::meets: return "meets";
    case AllenRelation::overlaps: return "overlaps";
    case AllenRelation::starts: return "starts";
    case AllenRelation::during: return "during";
    case AllenRelation::finishes: return "finishes";
    case AllenRelation::equals: return "equals";
    case AllenRelation::after: return "after";
    case AllenRelation::met_by: return "met_by";
    case AllenRelation::overlapped_by: return "overlapped_by";
    case AllenRelation::started_by: return "started_by";
    case AllenRelation::contains: return "contains";
    case AllenRelation::finished_by: return "finished_by";
  }
  return "?";
}

// Dates are closed day intervals, so "meets" requires a shared day
// (a.end == b.start); adjacent intervals (a.end + 1 day == b.start) are
// "before".
inline AllenRelation allen_relation(const DateInterval& a, const DateInterval& b) {
  const std::int64_t as = day_number(a.start), ae = day_number(a.end);
  const std::int64_t bs = day_number(b.start), be = day_number(b.end);
  if (as == bs && ae == be) return AllenRelation::equals;
  if (as == bs) return ae < be ? AllenRelation::starts : AllenRelation::started_by;
  if (ae == be) return as > bs ? AllenRelation::finishes : AllenRelation::finished_by;
  if (ae < bs) return AllenRelation::before;
  if (as > be) return AllenRelation::after;
  if (ae == bs) return AllenRelation::meets;
  if (as == be) return AllenRelation::met_by;
  if (as > bs && ae < be) return AllenRelation::during;
  if (as < bs && ae > be) return AllenRelation::contains;
  return as < bs ? AllenRelation::overlaps : AllenRelation::overlapped_by;
}

}  // namespace tempora

#endif  // TEMPORA_CALENDAR_HPP
