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


#pragma once

#include <compare>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tailscope/random.hpp"

namespace tailscope {

/// Proleptic Gregorian calendar date.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  static bool valid(int year, int month, int day);
  static Date from_days(long days);  // days since 1970-01-01
  long days() const;
  /// 0-based day of the year.
  int day_of_year() const;
  std::string iso() const;  // YYYY-MM-DD

  friend auto operator<=>(const Date&, const Date&) = default;
};

/// Parses `text` with a strftime-like format supporting %Y, %m, %d, %%
/// and literal characters. Returns nullopt for malformed or impossible
/// dates.
std::optional<Date> parse_date(const std::string& text, const std::string& format);

struct Gap {
  Date last_before;  // last observed date before the hole
  Date first_after;  // first observed date after it
  long missing_days;
};

struct RejectedLine {
  std::size_t line;
  std::string reason;
};

struct TimeSeries {
  std::vector<Date> timestamps;  // strictly increasing
  std::vector<double> values;
  std::vector<Gap> gaps;
  std::vector<RejectedLine> rejected;

  std::size_t size() const { return values.size(); }
};

/// Recomputes `gaps` from the timestamps.
void record_gaps(TimeSeries& ts);

struct CsvSchema {
  std::string date_column = "date";
  std::string value_column = "value";
  std::string date_format = "%Y-%m-%d";
  char delimiter = ',';
  /// Drop unparseable rows (listed in TimeSeries::rejected) instead of
  /// failing.
  bool skip_invalid = false;
};

/// Reads a headed CSV. Rows are sorted by date; duplicate dates raise
/// Errc::kDuplicateDate, unparseable rows Errc::kParse listing their line
/// numbers (unless skip_invalid), a missing file Errc::kIo.
TimeSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
TimeSeries parse_csv(std::istream& in, const CsvSchema& schema = {},
                     const std::string& source = "<stream>");

/// Calendar key (month, day); Feb 29 maps to Feb 28.
using MonthDay = std::pair<int, int>;
MonthDay calendar_key(const Date& d);

struct SeasonalProfile {
  std::map<MonthDay, double> day_std;
  std::map<MonthDay, std::size_t> day_count;
  /// Days with fewer than two observations whose std was pooled with
  /// neighboring calendar days.
  std::vector<MonthDay> pooled;

  double scale(const Date& d) const;
};

struct Deseasonalized {
  TimeSeries series;
  SeasonalProfile profile;
};

/// Divides each value by the unbiased standard deviation of its calendar
/// day across years. Errc::kDegenerateDay names a zero-variance day.
Deseasonalized deseasonalize(const TimeSeries& ts);

/// Subseries on [start, end]; Errc::kInsufficientData listing the gaps when
/// the result is not contiguous.
TimeSeries contiguous_segment(const TimeSeries& ts, std::optional<Date> start = std::nullopt,
                              std::optional<Date> end = std::nullopt);

struct ARModel {
  std::size_t order = 0;
  std::vector<double> phi;
  double noise_variance = 0.0;
  double mean = 0.0;
};

/// Biased (divide by n) autocovariances of the mean-centered series at
/// lags 0..max_lag.
std::vector<double> autocovariance(std::span<const double> x, std::size_t max_lag);

/// Yule-Walker fit through the Levinson-Durbin recursion; the mean is
/// removed inside. p = 0 gives the white-noise model.
ARModel yule_walker(std::span<const double> x, std::size_t p);

/// n log(sigma^2_p) + 2p for p = 0..p_max.
std::vector<double> aic_table(std::span<const double> x, std::size_t p_max);
/// argmin of aic_table, ties to the smallest p.
std::size_t select_order_aic(std::span<const double> x, std::size_t p_max);

/// e_t = (x_t - mean) - sum phi_i (x_{t-i} - mean), t = p+1..n.
std::vector<double> residuals(std::span<const double> x, const ARModel& model);

/// rho(0..max_lag), biased normalization.
std::vector<double> acf(std::span<const double> x, std::size_t max_lag);

/// Synthetic daily series: seasonal scale times an AR(2) process driven
/// by symmetric Pareto(alpha) innovations.
struct CompositeSpec {
  double alpha = 4.0;
  int years = 100;
  double phi1 = 0.5;
  double phi2 = -0.3;
  Date start{1930, 1, 1};
  double seasonal_base = 2.0;
  double seasonal_amplitude = 1.0;
  std::size_t burn_in = 500;

  /// Parses "alpha[,years[,phi1,phi2]]".
  static CompositeSpec parse(const std::string& params);
  std::string describe() const;
};

TimeSeries synthesize_composite(const CompositeSpec& spec, RandomSeed seed);

}  // namespace tailscope
