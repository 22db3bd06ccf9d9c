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


#include "tailscope/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "tailscope/error.hpp"
#include "tailscope/format.hpp"

namespace tailscope {
namespace {

std::vector<std::string> SplitRow(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == delimiter && !quoted) {
      fields.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  fields.push_back(field);
  for (auto& f : fields) {
    const auto b = f.find_first_not_of(" \t");
    const auto e = f.find_last_not_of(" \t");
    f = b == std::string::npos ? "" : f.substr(b, e - b + 1);
  }
  return fields;
}

int DaysInCommonMonth(int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return kDays[month - 1];
}

bool Blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::string DayName(const MonthDay& key) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d-%02d", key.first, key.second);
  return buf;
}

std::string ListGaps(const std::vector<Gap>& gaps) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(gaps.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i > 0) out += "; ";
    out += gaps[i].last_before.iso() + " -> " + gaps[i].first_after.iso() + " (" +
           std::to_string(gaps[i].missing_days) + " missing)";
  }
  if (gaps.size() > shown) out += "; ...";
  return out;
}

double Mean(std::span<const double> x) {
  long double s = 0.0L;
  for (double v : x) s += v;
  return static_cast<double>(s / static_cast<long double>(x.size()));
}

// Levinson-Durbin on autocovariances g[0..p]. Returns the order-p
// coefficients and the innovation variance of every order 0..p.
std::pair<std::vector<double>, std::vector<double>> Levinson(const std::vector<double>& g,
                                                             std::size_t p) {
  if (!(g[0] > 0.0)) {
    throw Error(Errc::kNumerical, "zero sample variance: Toeplitz system is singular");
  }
  std::vector<double> phi(p, 0.0);
  std::vector<double> prev(p, 0.0);
  std::vector<double> var{g[0]};
  double v = g[0];
  for (std::size_t k = 1; k <= p; ++k) {
    double acc = g[k];
    for (std::size_t j = 1; j < k; ++j) acc -= phi[j - 1] * g[k - j];
    const double kappa = acc / v;
    prev = phi;
    for (std::size_t j = 1; j < k; ++j) phi[j - 1] = prev[j - 1] - kappa * prev[k - j - 1];
    phi[k - 1] = kappa;
    v *= 1.0 - kappa * kappa;
    if (!(v > 0.0)) {
      throw Error(Errc::kNumerical,
                  "Toeplitz system singular at order " + std::to_string(k));
    }
    var.push_back(v);
  }
  return {phi, var};
}

}  // namespace

void record_gaps(TimeSeries& ts) {
  ts.gaps.clear();
  for (std::size_t i = 1; i < ts.timestamps.size(); ++i) {
    const long step = ts.timestamps[i].days() - ts.timestamps[i - 1].days();
    if (step > 1) ts.gaps.push_back({ts.timestamps[i - 1], ts.timestamps[i], step - 1});
  }
}

TimeSeries parse_csv(std::istream& in, const CsvSchema& schema, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (Blank(line)) continue;
    header = SplitRow(line, schema.delimiter);
    break;
  }
  if (header.empty()) throw Error(Errc::kParse, source + ": empty input, no header row");
  if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

  auto column = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(Errc::kParse, source + ": column '" + name + "' not found in header");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t date_col = column(schema.date_column);
  const std::size_t value_col = column(schema.value_column);

  std::vector<std::pair<Date, double>> rows;
  std::vector<RejectedLine> rejected;
  while (std::getline(in, line)) {
    ++line_no;
    if (Blank(line)) continue;
    const auto fields = SplitRow(line, schema.delimiter);
    if (fields.size() <= std::max(date_col, value_col)) {
      rejected.push_back({line_no, "too few fields"});
      continue;
    }
    const auto date = parse_date(fields[date_col], schema.date_format);
    if (!date) {
      rejected.push_back({line_no, "bad date '" + fields[date_col] + "'"});
      continue;
    }
    double value = 0.0;
    if (!parse_number(fields[value_col], value) || !std::isfinite(value)) {
      rejected.push_back({line_no, "bad value '" + fields[value_col] + "'"});
      continue;
    }
    rows.emplace_back(*date, value);
  }

  if (!rejected.empty() && !schema.skip_invalid) {
    std::string lines;
    for (std::size_t i = 0; i < rejected.size() && i < 20; ++i) {
      lines += (i ? ", " : "") + std::to_string(rejected[i].line);
    }
    if (rejected.size() > 20) lines += ", ...";
    throw Error(Errc::kParse, source + ": " + std::to_string(rejected.size()) +
                                  " unparseable row(s) at line(s) " + lines + " (first: " +
                                  rejected.front().reason + ")");
  }
  if (rows.empty()) throw Error(Errc::kParse, source + ": no data rows");

  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  TimeSeries ts;
  ts.rejected = std::move(rejected);
  for (const auto& [date, value] : rows) {
    if (!ts.timestamps.empty() && ts.timestamps.back() == date) {
      throw Error(Errc::kDuplicateDate, source + ": date " + date.iso() + " appears twice");
    }
    ts.timestamps.push_back(date);
    ts.values.push_back(value);
  }
  record_gaps(ts);
  return ts;
}

TimeSeries load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, "cannot open '" + path.string() + "'");
  return parse_csv(in, schema, path.string());
}

MonthDay calendar_key(const Date& d) {
  if (d.month == 2 && d.day == 29) return {2, 28};
  return {d.month, d.day};
}

double SeasonalProfile::scale(const Date& d) const {
  const auto it = day_std.find(calendar_key(d));
  if (it == day_std.end()) {
    throw Error(Errc::kDegenerateDay, "no seasonal scale for day " + DayName(calendar_key(d)));
  }
  return it->second;
}

Deseasonalized deseasonalize(const TimeSeries& ts) {
  if (ts.values.empty()) throw Error(Errc::kInsufficientData, "empty series");
  std::map<MonthDay, std::vector<double>> by_day;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    by_day[calendar_key(ts.timestamps[i])].push_back(ts.values[i]);
  }

  // Calendar keys laid out on a 365-day circle for pooling sparse days.
  std::vector<MonthDay> circle;
  for (int m = 1; m <= 12; ++m) {
    for (int d = 1; d <= DaysInCommonMonth(m); ++d) circle.emplace_back(m, d);
  }

  SeasonalProfile profile;
  for (const auto& [key, values] : by_day) {
    std::vector<double> pool = values;
    if (pool.size() < 2) {
      const auto pos = static_cast<long>(std::find(circle.begin(), circle.end(), key) - circle.begin());
      const long size = static_cast<long>(circle.size());
      for (long r = 1; pool.size() < 2 && r <= size / 2; ++r) {
        for (long side : {-r, r}) {
          const auto it = by_day.find(circle[static_cast<std::size_t>(((pos + side) % size + size) % size)]);
          if (it != by_day.end()) pool.insert(pool.end(), it->second.begin(), it->second.end());
        }
      }
      profile.pooled.push_back(key);
      if (pool.size() < 2) {
        throw Error(Errc::kInsufficientData, "too few observations to estimate day " +
                                                 DayName(key) + " standard deviation");
      }
    }
    const double m = Mean(pool);
    long double ss = 0.0L;
    for (double v : pool) ss += static_cast<long double>(v - m) * (v - m);
    const double sd = static_cast<double>(std::sqrt(ss / static_cast<long double>(pool.size() - 1)));
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      throw Error(Errc::kDegenerateDay, "day " + DayName(key) + " has zero variance across " +
                                            std::to_string(pool.size()) + " observations");
    }
    profile.day_std[key] = sd;
    profile.day_count[key] = values.size();
  }

  Deseasonalized out{ts, std::move(profile)};
  for (std::size_t i = 0; i < ts.size(); ++i) {
    out.series.values[i] = ts.values[i] / out.profile.scale(ts.timestamps[i]);
  }
  return out;
}

TimeSeries contiguous_segment(const TimeSeries& ts, std::optional<Date> start,
                              std::optional<Date> end) {
  TimeSeries out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Date& d = ts.timestamps[i];
    if ((start && d < *start) || (end && d > *end)) continue;
    out.timestamps.push_back(d);
    out.values.push_back(ts.values[i]);
  }
  if (out.values.empty()) throw Error(Errc::kInsufficientData, "segment contains no observations");
  record_gaps(out);
  if (!out.gaps.empty()) {
    throw Error(Errc::kInsufficientData,
                "series is not contiguous; " + std::to_string(out.gaps.size()) +
                    " gap(s): " + ListGaps(out.gaps) +
                    ". Declare a contiguous segment (start:end) for AR fitting");
  }
  return out;
}

std::vector<double> autocovariance(std::span<const double> x, std::size_t max_lag) {
  const std::size_t n = x.size();
  if (max_lag >= n) {
    throw Error(Errc::kRange, "lag " + std::to_string(max_lag) + " needs more than " +
                                  std::to_string(n) + " observations");
  }
  const double mu = Mean(x);
  std::vector<double> c(n);
  for (std::size_t t = 0; t < n; ++t) c[t] = x[t] - mu;
  std::vector<double> g(max_lag + 1);
  for (std::size_t h = 0; h <= max_lag; ++h) {
    long double s = 0.0L;
    for (std::size_t t = 0; t + h < n; ++t) s += static_cast<long double>(c[t]) * c[t + h];
    g[h] = static_cast<double>(s / static_cast<long double>(n));
  }
  return g;
}

ARModel yule_walker(std::span<const double> x, std::size_t p) {
  if (x.size() <= p) {
    throw Error(Errc::kInsufficientData, "AR(" + std::to_string(p) + ") needs more than " +
                                             std::to_string(p) + " observations");
  }
  const auto g = autocovariance(x, p);
  auto [phi, var] = Levinson(g, p);
  return ARModel{p, std::move(phi), var.back(), Mean(x)};
}

std::vector<double> aic_table(std::span<const double> x, std::size_t p_max) {
  if (x.size() <= p_max) {
    throw Error(Errc::kInsufficientData, "order search up to " + std::to_string(p_max) +
                                             " needs more observations");
  }
  const auto g = autocovariance(x, p_max);
  const auto var = Levinson(g, p_max).second;
  const double n = static_cast<double>(x.size());
  std::vector<double> aic(p_max + 1);
  for (std::size_t p = 0; p <= p_max; ++p) aic[p] = n * std::log(var[p]) + 2.0 * static_cast<double>(p);
  return aic;
}

std::size_t select_order_aic(std::span<const double> x, std::size_t p_max) {
  const auto aic = aic_table(x, p_max);
  std::size_t best = 0;
  for (std::size_t p = 1; p < aic.size(); ++p) {
    if (aic[p] < aic[best]) best = p;
  }
  return best;
}

std::vector<double> residuals(std::span<const double> x, const ARModel& model) {
  const std::size_t p = model.order;
  if (x.size() <= p || model.phi.size() != p) {
    throw Error(Errc::kInsufficientData, "residuals need more observations than the AR order");
  }
  std::vector<double> e;
  e.reserve(x.size() - p);
  for (std::size_t t = p; t < x.size(); ++t) {
    double r = x[t] - model.mean;
    for (std::size_t i = 1; i <= p; ++i) r -= model.phi[i - 1] * (x[t - i] - model.mean);
    e.push_back(r);
  }
  return e;
}

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
  const auto g = autocovariance(x, max_lag);
  if (!(g[0] > 0.0)) throw Error(Errc::kDegenerate, "ACF of a constant series");
  std::vector<double> rho(g.size());
  for (std::size_t h = 0; h < g.size(); ++h) rho[h] = g[h] / g[0];
  return rho;
}

CompositeSpec CompositeSpec::parse(const std::string& params) {
  std::vector<double> v;
  std::stringstream ss(params);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0.0;
    if (!parse_number(item, x)) {
      throw Error(Errc::kConfiguration, "bad number '" + item + "' in composite spec");
    }
    v.push_back(x);
  }
  if (v.empty() || v.size() == 3 || v.size() > 4) {
    throw Error(Errc::kConfiguration, "composite expects alpha[,years[,phi1,phi2]]");
  }
  CompositeSpec spec;
  spec.alpha = v[0];
  if (v.size() > 1) {
    if (v[1] != std::floor(v[1]) || v[1] < 1) {
      throw Error(Errc::kConfiguration, "composite years must be a positive integer");
    }
    spec.years = static_cast<int>(v[1]);
  }
  if (v.size() == 4) {
    spec.phi1 = v[2];
    spec.phi2 = v[3];
  }
  return spec;
}

std::string CompositeSpec::describe() const {
  return "composite:" + format_shortest(alpha) + "," + std::to_string(years) + "," +
         format_shortest(phi1) + "," + format_shortest(phi2);
}

TimeSeries synthesize_composite(const CompositeSpec& spec, RandomSeed seed) {
  if (!(spec.alpha > 0.0) || spec.years < 1) {
    throw Error(Errc::kConfiguration, "composite needs alpha > 0 and years >= 1");
  }
  // Stationarity triangle of AR(2).
  if (!(std::abs(spec.phi2) < 1.0 && spec.phi1 + spec.phi2 < 1.0 && spec.phi2 - spec.phi1 < 1.0)) {
    throw Error(Errc::kConfiguration, "composite AR(2) coefficients are not stationary");
  }
  if (!(spec.seasonal_base > std::abs(spec.seasonal_amplitude))) {
    throw Error(Errc::kConfiguration, "seasonal scale must stay positive");
  }
  CounterRng rng(seed);
  auto innovation = [&] {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return sign * std::pow(rng.uniform(), -1.0 / spec.alpha);
  };

  const long first = spec.start.days();
  const long last = Date{spec.start.year + spec.years, spec.start.month,
                         std::min(spec.start.day, 28)}.days();
  double y1 = 0.0;
  double y2 = 0.0;
  for (std::size_t i = 0; i < spec.burn_in; ++i) {
    const double y = spec.phi1 * y1 + spec.phi2 * y2 + innovation();
    y2 = y1;
    y1 = y;
  }
  TimeSeries ts;
  for (long day = first; day < last; ++day) {
    const double y = spec.phi1 * y1 + spec.phi2 * y2 + innovation();
    y2 = y1;
    y1 = y;
    const Date d = Date::from_days(day);
    const double scale =
        spec.seasonal_base +
        spec.seasonal_amplitude * std::sin(2.0 * std::numbers::pi * d.day_of_year() / 365.25);
    ts.timestamps.push_back(d);
    ts.values.push_back(scale * y);
  }
  return ts;
}

}  // namespace tailscope
