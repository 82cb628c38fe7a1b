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

#ifndef TEMPORA_TEL_MATCH_HPP
#define TEMPORA_TEL_MATCH_HPP

#include <algorithm>
#include <cctype>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "tempora/calendar.hpp"
#include "tempora/errors.hpp"
#include "tempora/tel/ast.hpp"

// Maps an evaluated TEL value onto a multiple-choice option list. The policy
// is conservative: anything short of a unique, well-understood match is a
// NoMatch, and the caller falls back to LLM selection.

namespace tempora::tel {

namespace textutil {

inline std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

inline bool iequals(std::string_view a, std::string_view b) {
  return lower(a) == lower(b);
}

}  // namespace textutil

namespace detail {

inline std::optional<int> month_from_name(const std::string& name) {
  static const char* months[12] = {"january", "february", "march",     "april",
                                   "may",     "june",     "july",      "august",
                                   "september", "october", "november", "december"};
  std::string n = textutil::lower(name);
  for (int i = 0; i < 12; ++i) {
    if (n == months[i]) return i + 1;
  }
  return std::nullopt;
}

inline std::optional<CalDate> checked_date(int y, int m, int d) {
  if (!is_valid_date(y, m, d)) return std::nullopt;
  return CalDate{y, m, d};
}

}  // namespace detail

// Recognizes a date written as a whole token: ISO "2020-03-12",
// US "03/16/2020", prose "March 12, 2020" or "12 March 2020".
inline std::optional<CalDate> parse_date_text(const std::string& raw) {
  const std::string s = textutil::trim(raw);
  static const std::regex iso(R"(^(\d{4})-(\d{1,2})-(\d{1,2})$)");
  static const std::regex us(R"(^(\d{1,2})/(\d{1,2})/(\d{4})$)");
  static const std::regex prose_mdy(R"(^([A-Za-z]+)\s+(\d{1,2}),?\s+(\d{4})$)");
  static const std::regex prose_dmy(R"(^(\d{1,2})\s+([A-Za-z]+),?\s+(\d{4})$)");
  std::smatch m;
  if (std::regex_match(s, m, iso)) {
    return detail::checked_date(std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]));
  }
  if (std::regex_match(s, m, us)) {
    return detail::checked_date(std::stoi(m[3]), std::stoi(m[1]), std::stoi(m[2]));
  }
  if (std::regex_match(s, m, prose_mdy)) {
    if (auto mon = detail::month_from_name(m[1])) {
      return detail::checked_date(std::stoi(m[3]), *mon, std::stoi(m[2]));
    }
    return std::nullopt;
  }
  if (std::regex_match(s, m, prose_dmy)) {
    if (auto mon = detail::month_from_name(m[2])) {
      return detail::checked_date(std::stoi(m[3]), *mon, std::stoi(m[1]));
    }
    return std::nullopt;
  }
  return std::nullopt;
}

// Every date mentioned anywhere inside free text, in order of appearance.
inline std::vector<CalDate> scan_dates(const std::string& text) {
  static const std::regex any(
      R"((\d{4}-\d{1,2}-\d{1,2})|(\d{1,2}/\d{1,2}/\d{4})|([A-Za-z]+\s+\d{1,2},?\s+\d{4})|(\d{1,2}\s+[A-Za-z]+,?\s+\d{4}))");
  std::vector<CalDate> out;
  auto begin = std::sregex_iterator(text.begin(), text.end(), any);
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    if (auto d = parse_date_text(it->str())) out.push_back(*d);
  }
  return out;
}

// "<n> day(s)/week(s)/month(s)/year(s)". Weeks normalize to days; months and
// years stay calendar components.
inline std::optional<Duration> parse_duration_text(const std::string& raw) {
  static const std::regex pat(
      R"(^(\d+)\s+(day|days|week|weeks|month|months|year|years)$)",
      std::regex::icase);
  std::smatch m;
  const std::string s = textutil::trim(raw);
  if (!std::regex_match(s, m, pat)) return std::nullopt;
  const std::int64_t n = std::stoll(m[1].str());
  const std::string unit = textutil::lower(m[2].str());
  if (unit == "day" || unit == "days") return Duration::of_days(n);
  if (unit == "week" || unit == "weeks") return Duration::of_days(n * 7);
  if (unit == "month" || unit == "months")
    return Duration::of_months(static_cast<int>(n));
  return Duration::of_years(static_cast<int>(n));
}

inline bool is_unanswerable_text(const std::string& s) {
  return textutil::iequals(textutil::trim(s), "unanswerable");
}

// Index of the explicit "Unanswerable" option, if the list has one.
inline std::optional<int> unanswerable_index(const std::vector<std::string>& options) {
  for (size_t i = 0; i < options.size(); ++i) {
    if (is_unanswerable_text(options[i])) return static_cast<int>(i);
  }
  return std::nullopt;
}

// Returns the unique option index the value denotes, or nullopt (NoMatch).
// Throws AmbiguityError when two options normalize to the same value as v.
inline std::optional<int> match_option(const Value& v,
                                       const std::vector<std::string>& options) {
  if (options.empty()) throw ContractError("match_option requires options");

  if (const auto* text = std::get_if<std::string>(&v.v)) {
    const std::string t = textutil::trim(*text);
    if (is_unanswerable_text(t)) return unanswerable_index(options);
    if (t.size() == 1 && std::isalpha(static_cast<unsigned char>(t[0]))) {
      int idx = std::toupper(static_cast<unsigned char>(t[0])) - 'A';
      if (idx >= 0 && idx < static_cast<int>(options.size())) return idx;
      return std::nullopt;
    }
    for (size_t i = 0; i < options.size(); ++i) {
      if (textutil::iequals(textutil::trim(options[i]), t) &&
          !is_unanswerable_text(options[i])) {
        return static_cast<int>(i);
      }
    }
    return std::nullopt;
  }

  std::vector<int> hits;
  if (const auto* date = std::get_if<CalDate>(&v.v)) {
    for (size_t i = 0; i < options.size(); ++i) {
      if (auto od = parse_date_text(options[i]); od && *od == *date) {
        hits.push_back(static_cast<int>(i));
      }
    }
  } else if (const auto* dur = std::get_if<Duration>(&v.v)) {
    for (size_t i = 0; i < options.size(); ++i) {
      if (auto od = parse_duration_text(options[i]); od && *od == *dur) {
        hits.push_back(static_cast<int>(i));
      }
    }
  } else {
    // intervals and booleans never auto-match
    return std::nullopt;
  }

  if (hits.empty()) return std::nullopt;
  if (hits.size() > 1) {
    throw AmbiguityError("options " + std::to_string(hits[0]) + " and " +
                         std::to_string(hits[1]) +
                         " both normalize to the evaluated value");
  }
  return hits[0];
}

}  // namespace tempora::tel

#endif  // TEMPORA_TEL_MATCH_HPP
