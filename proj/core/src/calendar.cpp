// Copyright 2026 The Tailscope Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cctype>
#include <cstdio>

#include "tailscope/pipeline.hpp"

namespace tailscope {
namespace {

constexpr int kDaysInMonth[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

bool IsLeap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int DaysInMonth(int y, int m) { return m == 2 && IsLeap(y) ? 29 : kDaysInMonth[m - 1]; }

// Reads up to `max_digits` digits starting at text[pos].
bool ReadNumber(const std::string& text, std::size_t& pos, int max_digits, int& out) {
  int digits = 0;
  int value = 0;
  while (pos < text.size() && digits < max_digits &&
         std::isdigit(static_cast<unsigned char>(text[pos]))) {
    value = value * 10 + (text[pos] - '0');
    ++pos;
    ++digits;
  }
  out = value;
  return digits > 0;
}

}  // namespace

bool Date::valid(int year, int month, int day) {
  return month >= 1 && month <= 12 && day >= 1 && day <= DaysInMonth(year, month);
}

// Civil-from-days and days-from-civil after H. Hinnant's public-domain
// algorithms.
long Date::days() const {
  const int y = year - (month <= 2 ? 1 : 0);
  const long era = (y >= 0 ? y : y - 399) / 400;
  const long yoe = y - era * 400;
  const long mp = (month + 9) % 12;
  const long doy = (153 * mp + 2) / 5 + day - 1;
  const long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + doe - 719468;
}

Date Date::from_days(long z) {
  z += 719468;
  const long era = (z >= 0 ? z : z - 146096) / 146097;
  const long doe = z - era * 146097;
  const long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const long mp = (5 * doy + 2) / 153;
  const int d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  const int m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  const int y = static_cast<int>(yoe + era * 400 + (m <= 2 ? 1 : 0));
  return Date{y, m, d};
}

int Date::day_of_year() const {
  return static_cast<int>(days() - Date{year, 1, 1}.days());
}

std::string Date::iso() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

std::optional<Date> parse_date(const std::string& text, const std::string& format) {
  std::size_t b = 0;
  std::size_t e = text.size();
  while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
  const std::string s = text.substr(b, e - b);

  int year = -1;
  int month = -1;
  int day = -1;
  std::size_t pos = 0;
  for (std::size_t f = 0; f < format.size(); ++f) {
    if (format[f] == '%' && f + 1 < format.size()) {
      const char spec = format[++f];
      bool ok = true;
      switch (spec) {
        case 'Y': ok = ReadNumber(s, pos, 4, year); break;
        case 'm': ok = ReadNumber(s, pos, 2, month); break;
        case 'd': ok = ReadNumber(s, pos, 2, day); break;
        case '%': ok = pos < s.size() && s[pos++] == '%'; break;
        default: return std::nullopt;
      }
      if (!ok) return std::nullopt;
    } else if (pos >= s.size() || s[pos++] != format[f]) {
      return std::nullopt;
    }
  }
  if (pos != s.size() || year < 0 || month < 0 || day < 0) return std::nullopt;
  if (!Date::valid(year, month, day)) return std::nullopt;
  return Date{year, month, day};
}

}  // namespace tailscope
