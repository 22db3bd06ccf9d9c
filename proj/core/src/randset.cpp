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


#include "tailscope/randset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tailscope/error.hpp"
#include "tailscope/estimators.hpp"
#include "tailscope/format.hpp"
#include "tailscope/numeric.hpp"

namespace tailscope {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Every limit set is the graph of y = f(x) over an x-interval.
struct Graph {
  double x_start;
  double x_end;
  std::function<double(double)> f;
};

Graph AsGraph(const LimitSet& limit) {
  return std::visit(
      Overloaded{
          [](const PositiveLine& l) {
            const double slope = l.xi / (1.0 - l.xi);
            return Graph{1.0, kInf, [slope](double x) { return slope * x; }};
          },
          [](const HeavyCurve& l) {
            const double inv = 1.0 / l.xi;
            const double s = l.s;
            return Graph{1.0, kInf, [inv, s](double x) { return s * std::pow(x, inv); }};
          },
          [](const Xi1Curve& l) {
            const double s = l.s;
            return Graph{1.0, kInf, [s](double x) { return x * (s - 1.0 - std::log(x)); }};
          },
          [](const NegativeSegment& l) {
            const double slope = l.xi / (1.0 - l.xi);
            return Graph{0.0, 1.0, [slope](double x) { return slope * (x - 1.0); }};
          },
          [](const ZeroLine& l) {
            const double level = l.level;
            return Graph{0.0, kInf, [level](double) { return level; }};
          },
      },
      limit);
}

bool SegmentMeetsWindow(const Point2D& a, const Point2D& b, const Window& w) {
  return std::max(a.x, b.x) >= w.x_lo() && std::min(a.x, b.x) <= w.x_hi() &&
         std::max(a.y, b.y) >= w.y_lo() && std::min(a.y, b.y) <= w.y_hi();
}

void Refine(const Graph& g, const Point2D& a, const Point2D& b, const Window& w, double h,
            int depth, PointSet2D& out) {
  const double gap = std::hypot(b.x - a.x, b.y - a.y);
  if (depth > 0 && gap > h && SegmentMeetsWindow(a, b, w)) {
    const double xm = 0.5 * (a.x + b.x);
    const Point2D m{xm, g.f(xm)};
    Refine(g, a, m, w, h, depth - 1, out);
    Refine(g, m, b, w, h, depth - 1, out);
    return;
  }
  if (w.contains(b)) out.push_back(b);
}

// Largest distance from a point of `from` to its nearest neighbor in `to`;
// `to` must be sorted by x.
double Directed(const PointSet2D& from, const PointSet2D& to) {
  double worst = 0.0;
  for (const Point2D& p : from) {
    const auto mid = std::lower_bound(to.begin(), to.end(), p.x,
                                      [](const Point2D& q, double x) { return q.x < x; });
    double best2 = kInf;
    for (auto it = mid; it != to.end(); ++it) {
      const double dx = it->x - p.x;
      if (dx * dx >= best2) break;
      const double dy = it->y - p.y;
      best2 = std::min(best2, dx * dx + dy * dy);
    }
    for (auto it = mid; it != to.begin();) {
      --it;
      const double dx = p.x - it->x;
      if (dx * dx >= best2) break;
      const double dy = it->y - p.y;
      best2 = std::min(best2, dx * dx + dy * dy);
    }
    worst = std::max(worst, best2);
  }
  return std::sqrt(worst);
}

void SortByX(PointSet2D& points) {
  std::sort(points.begin(), points.end(),
            [](const Point2D& a, const Point2D& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
}

}  // namespace

Window::Window(double x_lo, double x_hi, double y_lo, double y_hi)
    : x_lo_(x_lo), x_hi_(x_hi), y_lo_(y_lo), y_hi_(y_hi) {
  if (!(x_lo < x_hi) || !(y_lo < y_hi) || !std::isfinite(x_hi - x_lo) ||
      !std::isfinite(y_hi - y_lo)) {
    throw Error(Errc::kConfiguration, "window needs finite x_lo < x_hi and y_lo < y_hi");
  }
}

Window Window::parse(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0.0;
    if (!parse_number(item, x)) {
      throw Error(Errc::kConfiguration, "bad number '" + item + "' in window '" + text + "'");
    }
    v.push_back(x);
  }
  if (v.size() != 4) {
    throw Error(Errc::kConfiguration, "window must be x0,x1,y0,y1, got '" + text + "'");
  }
  return Window(v[0], v[1], v[2], v[3]);
}

double Window::diagonal() const { return std::hypot(x_hi_ - x_lo_, y_hi_ - y_lo_); }

bool Window::contains(const Point2D& p) const {
  return p.x >= x_lo_ && p.x <= x_hi_ && p.y >= y_lo_ && p.y <= y_hi_;
}

std::string Window::describe() const {
  return "[" + format_shortest(x_lo_) + "," + format_shortest(x_hi_) + "]x[" +
         format_shortest(y_lo_) + "," + format_shortest(y_hi_) + "]";
}

void validate(const LimitSet& limit) {
  std::visit(Overloaded{
                 [](const PositiveLine& l) {
                   if (!(l.xi > 0.0 && l.xi < 1.0)) {
                     throw Error(Errc::kParameter, "positive line needs xi in (0, 1)");
                   }
                 },
                 [](const HeavyCurve& l) {
                   if (!(l.xi > 1.0) || !(l.s > 0.0)) {
                     throw Error(Errc::kParameter, "heavy curve needs xi > 1 and s > 0");
                   }
                 },
                 [](const Xi1Curve& l) {
                   if (!std::isfinite(l.s)) throw Error(Errc::kParameter, "s must be finite");
                 },
                 [](const NegativeSegment& l) {
                   if (!(l.xi < 0.0)) {
                     throw Error(Errc::kParameter, "negative segment needs xi < 0");
                   }
                 },
                 [](const ZeroLine& l) {
                   if (!std::isfinite(l.level)) {
                     throw Error(Errc::kParameter, "level must be finite");
                   }
                 },
             },
             limit);
}

std::string describe(const LimitSet& limit) {
  return std::visit(
      Overloaded{
          [](const PositiveLine& l) { return "positive_line(xi=" + format_shortest(l.xi) + ")"; },
          [](const HeavyCurve& l) {
            return "heavy_curve(xi=" + format_shortest(l.xi) + ",s=" + format_shortest(l.s) + ")";
          },
          [](const Xi1Curve& l) { return "xi1_curve(s=" + format_shortest(l.s) + ")"; },
          [](const NegativeSegment& l) {
            return "negative_segment(xi=" + format_shortest(l.xi) + ")";
          },
          [](const ZeroLine& l) { return "zero_line(level=" + format_shortest(l.level) + ")"; },
      },
      limit);
}

PointSet2D discretize(const LimitSet& limit, const Window& window, std::size_t resolution) {
  if (resolution < 2) throw Error(Errc::kConfiguration, "resolution must be at least 2");
  validate(limit);
  const Graph g = AsGraph(limit);
  const double lo = std::max(g.x_start, window.x_lo());
  const double hi = std::min(g.x_end, window.x_hi());
  PointSet2D out;
  if (lo > hi) return out;

  const double h = window.diagonal() / static_cast<double>(resolution);
  const Point2D first{lo, g.f(lo)};
  if (window.contains(first)) out.push_back(first);
  if (hi == lo) return out;
  Point2D prev = first;
  for (std::size_t j = 1; j <= resolution; ++j) {
    const double x = j == resolution
                         ? hi
                         : lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(resolution);
    const Point2D next{x, g.f(x)};
    Refine(g, prev, next, window, h, 60, out);
    prev = next;
  }
  return out;
}

PointSet2D restrict_to(const PointSet2D& points, const Window& window) {
  PointSet2D out;
  for (const auto& p : points) {
    if (window.contains(p)) out.push_back(p);
  }
  return out;
}

double hausdorff_window(const PointSet2D& a, const PointSet2D& b, const Window& window) {
  PointSet2D ra = restrict_to(a, window);
  PointSet2D rb = restrict_to(b, window);
  if (ra.empty()) {
    throw EmptyWindowError(EmptyWindowError::Side::kFirst,
                           "first set has no point in window " + window.describe());
  }
  if (rb.empty()) {
    throw EmptyWindowError(EmptyWindowError::Side::kSecond,
                           "second set has no point in window " + window.describe());
  }
  SortByX(ra);
  SortByX(rb);
  return std::max(Directed(ra, rb), Directed(rb, ra));
}

std::string to_string(TailCase c) {
  switch (c) {
    case TailCase::kPositive: return "positive";
    case TailCase::kNegative: return "negative";
    case TailCase::kZero: return "zero";
  }
  return "unknown";
}

TailCase parse_case(const std::string& text) {
  if (text == "positive") return TailCase::kPositive;
  if (text == "negative") return TailCase::kNegative;
  if (text == "zero") return TailCase::kZero;
  throw Error(Errc::kConfiguration,
              "unknown case '" + text + "' (expected positive, negative or zero)");
}

Window default_window(TailCase c, double xi) {
  switch (c) {
    case TailCase::kPositive:
      return Window(1.0, 3.0, 0.0, 2.0 * (xi / (1.0 - xi)) * 3.0);
    case TailCase::kNegative:
      return Window(0.0, 1.0, std::min(0.0, xi / (xi - 1.0)) - 0.1, 0.5);
    case TailCase::kZero:
      return Window(0.0, 3.0, 0.0, 2.0);
  }
  throw Error(Errc::kConfiguration, "unknown case");
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(Errc::kInsufficientData, "median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  if (std::isinf(upper) || std::isinf(lower)) return upper == lower ? upper : kInf;
  return 0.5 * (lower + upper);
}

ConvergenceReport run_convergence(const dist::DistributionModel& model,
                                  const ConvergenceConfig& config) {
  if (config.n_grid.empty() || config.reps == 0) {
    throw Error(Errc::kConfiguration, "convergence needs a non-empty n grid and reps >= 1");
  }
  const auto xi = model.extreme_value_index();
  const TailCase tc = config.tail_case;

  LimitSet limit = ZeroLine{config.zero_level};
  if (config.reference) {
    limit = *config.reference;
  } else {
    if (!xi) throw Error(Errc::kConfiguration, model.describe() + " has no known xi");
    const double x = *xi;
    const bool ok = (tc == TailCase::kPositive && x > 0.0 && x < 1.0) ||
                    (tc == TailCase::kNegative && x < 0.0) ||
                    (tc == TailCase::kZero && x == 0.0);
    if (!ok) {
      throw Error(Errc::kConfiguration, "case '" + to_string(tc) + "' does not apply to " +
                                            model.describe() + " (xi = " + format_shortest(x) + ")");
    }
    if (tc == TailCase::kPositive) limit = PositiveLine{x};
    if (tc == TailCase::kNegative) limit = NegativeSegment{x};
  }
  validate(limit);

  double window_xi = xi.value_or(0.0);
  if (const auto* line = std::get_if<PositiveLine>(&limit)) window_xi = line->xi;
  if (const auto* seg = std::get_if<NegativeSegment>(&limit)) window_xi = seg->xi;
  const Window window = config.window ? *config.window : default_window(tc, window_xi);
  const PointSet2D target = discretize(limit, window, config.resolution);
  if (target.empty()) {
    throw Error(Errc::kConfiguration,
                "limit " + describe(limit) + " misses window " + window.describe());
  }

  ConvergenceReport report{model.describe(), to_string(tc), describe(limit), config.n_grid,
                           {}, {}, config.k_rule.describe(), window, config.seed, config.reps};
  for (std::size_t n : config.n_grid) {
    if (n < 2) throw Error(Errc::kConfiguration, "sample sizes must be at least 2");
    report.k_values.push_back(config.k_rule(n));
  }
  const std::size_t cols = config.n_grid.size();
  report.distances.assign(config.reps, std::vector<double>(cols, 0.0));

  numeric::parallel_for(
      config.reps * cols,
      [&](std::size_t task) {
        const std::size_t rep = task / cols;
        const std::size_t j = task % cols;
        const std::size_t n = config.n_grid[j];
        const std::size_t k = report.k_values[j];
        const OrderedSample s(dist::sample(model, n, config.seed.substream(task)));
        PointSet2D pts;
        switch (tc) {
          case TailCase::kPositive: pts = normalize_positive(s, k); break;
          case TailCase::kNegative: pts = normalize_negative(s, k); break;
          case TailCase::kZero: pts = normalize_zero(s, k); break;
        }
        double d = kInf;
        try {
          d = hausdorff_window(pts, target, window);
        } catch (const EmptyWindowError& e) {
          if (e.side() != EmptyWindowError::Side::kFirst) throw;
        }
        report.distances[rep][j] = d;
      },
      config.threads);
  return report;
}

ImprovementSummary summarize(const ConvergenceReport& report) {
  ImprovementSummary out;
  const std::size_t cols = report.n_grid.size();
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> column;
    for (const auto& row : report.distances) column.push_back(row[j]);
    out.medians.push_back(median(std::move(column)));
  }
  std::size_t better = 0;
  for (const auto& row : report.distances) {
    if (row.back() < row.front()) ++better;
  }
  out.paired_improvement =
      report.distances.empty() ? 0.0
                               : static_cast<double>(better) / static_cast<double>(report.distances.size());
  out.improved = cols >= 2 && out.medians.back() < out.medians.front();
  return out;
}

InterceptResult intercept_experiment(const dist::DistributionModel& model, std::size_t n,
                                     const KRule& k_rule, std::size_t reps, RandomSeed seed,
                                     unsigned threads) {
  const auto xi = model.extreme_value_index();
  if (!xi || !(*xi > 1.0)) {
    throw Error(Errc::kConfiguration,
                "intercept experiment needs xi > 1; " + model.describe() + " does not qualify");
  }
  if (reps == 0) throw Error(Errc::kConfiguration, "reps must be at least 1");
  const std::size_t k = k_rule(n);
  const double nd = static_cast<double>(n);
  const double b_n = dist::quantile_b(model, nd);
  const double b_nk = dist::quantile_b(model, nd / static_cast<double>(k));

  InterceptResult out;
  out.slopes.resize(reps);
  out.intercepts.resize(reps);
  std::vector<std::size_t> filtered(reps, 0);
  numeric::parallel_for(
      reps,
      [&](std::size_t rep) {
        const OrderedSample s(dist::sample(model, n, seed.substream(rep)));
        PointSet2D logs;
        for (const Point2D& p : normalize_heavy(s, k, b_nk, b_n)) {
          if (p.x > 0.0 && p.y > 0.0) {
            logs.push_back({std::log(p.x), std::log(p.y)});
          } else {
            ++filtered[rep];
          }
        }
        const FitResult fit = ls_fit(logs, PlotKind::kRaw);
        out.slopes[rep] = fit.slope;
        out.intercepts[rep] = fit.intercept;
      },
      threads);
  for (std::size_t f : filtered) out.filtered += f;

  const auto law = dist::StableLaw::positive_stable(*xi);
  for (double v : dist::sample(law, reps, seed.substream(reps))) out.reference.push_back(std::log(v));
  if (reps >= 2) out.ks = ks_two_sample(out.intercepts, out.reference);
  return out;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw Error(Errc::kInsufficientData, "KS statistic needs two non-empty samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace tailscope
