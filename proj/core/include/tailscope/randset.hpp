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

#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tailscope/dist.hpp"
#include "tailscope/empirics.hpp"
#include "tailscope/random.hpp"

namespace tailscope {

/// Axis-aligned compact rectangle.
class Window {
 public:
  /// Throws Errc::kConfiguration unless x_lo < x_hi and y_lo < y_hi.
  Window(double x_lo, double x_hi, double y_lo, double y_hi);
  /// "x0,x1,y0,y1".
  static Window parse(const std::string& text);

  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  double y_lo() const { return y_lo_; }
  double y_hi() const { return y_hi_; }
  double diagonal() const;
  bool contains(const Point2D& p) const;
  std::string describe() const;

  friend bool operator==(const Window&, const Window&) = default;

 private:
  double x_lo_, x_hi_, y_lo_, y_hi_;
};

/// {(t, t xi/(1-xi)) : t >= 1}, xi in (0, 1).
struct PositiveLine {
  double xi;
};
/// {(t^xi, t s) : t >= 1}, xi > 1, s > 0.
struct HeavyCurve {
  double xi;
  double s;
};
/// {t (1, s - 1 - log t) : t >= 1}.
struct Xi1Curve {
  double s;
};
/// {(t, (xi/(1-xi))(t-1)) : 0 <= t <= 1}, xi < 0.
struct NegativeSegment {
  double xi;
};
/// {(t, level) : t >= 0}. The normalized ME plot of a Gumbel-domain sample
/// settles at 1/ln 2 because the x-normalizer X_(ceil(k/2)) - X_(k) grows
/// like ln 2 times the ME scale; level 1 gives the line drawn in the
/// original statement.
struct ZeroLine {
  double level = 1.0 / std::numbers::ln2;
};

using LimitSet = std::variant<PositiveLine, HeavyCurve, Xi1Curve, NegativeSegment, ZeroLine>;

/// Validates parameters; throws Errc::kParameter.
void validate(const LimitSet& limit);
std::string describe(const LimitSet& limit);

/// Points of the limit inside `window`, consecutive points along each
/// connected piece at most diagonal/resolution apart. Empty when the limit
/// misses the window.
PointSet2D discretize(const LimitSet& limit, const Window& window, std::size_t resolution);

PointSet2D restrict_to(const PointSet2D& points, const Window& window);

/// Hausdorff distance between the parts of `a` and `b` inside `window`.
/// Throws EmptyWindowError naming the empty side.
double hausdorff_window(const PointSet2D& a, const PointSet2D& b, const Window& window);

/// Tail types whose normalized ME plot has a deterministic limit.
enum class TailCase { kPositive, kNegative, kZero };

std::string to_string(TailCase c);
TailCase parse_case(const std::string& text);

/// Window covering the informative part of the case's limit.
Window default_window(TailCase c, double xi);

struct ConvergenceConfig {
  TailCase tail_case = TailCase::kPositive;
  std::vector<std::size_t> n_grid;
  KRule k_rule = KRule::power(0.7);
  std::size_t reps = 50;
  std::optional<Window> window;  // default_window when unset
  RandomSeed seed;
  std::size_t resolution = 4000;
  /// Level of the zero-case limit line.
  double zero_level = 1.0 / std::numbers::ln2;
  /// Reference limit overriding the model-derived one. Skips the
  /// hypothesis check, for deliberate mismatch experiments.
  std::optional<LimitSet> reference;
  unsigned threads = 0;
};

struct ConvergenceReport {
  std::string model;
  std::string tail_case;
  std::string limit;
  std::vector<std::size_t> n_grid;
  std::vector<std::size_t> k_values;
  /// distances[rep][j] for n_grid[j]; +inf when the data set misses the
  /// window.
  std::vector<std::vector<double>> distances;
  std::string k_rule;
  Window window;
  RandomSeed seed;
  std::size_t reps = 0;
};

/// Simulates each (replication, n) pair on stream
/// seed.stream + rep * |n_grid| + j, normalizes per case and measures the
/// windowed Hausdorff distance to the discretized limit.
ConvergenceReport run_convergence(const dist::DistributionModel& model,
                                  const ConvergenceConfig& config);

struct ImprovementSummary {
  std::vector<double> medians;       // per n
  double paired_improvement = 0.0;   // fraction of reps with d(last n) < d(first n)
  bool improved = false;             // median at the largest n below median at the smallest
};

ImprovementSummary summarize(const ConvergenceReport& report);

double median(std::vector<double> values);

struct InterceptResult {
  std::vector<double> slopes;
  std::vector<double> intercepts;
  /// log of independent draws of S_{1/xi}.
  std::vector<double> reference;
  /// Points dropped from the log transform (nonpositive coordinates).
  std::size_t filtered = 0;
  /// KS statistic between intercepts and reference; unset for reps < 2.
  std::optional<double> ks;
};

/// Fits the log-log transform of the heavy-tail normalization per
/// replication. Needs a model with xi > 1.
InterceptResult intercept_experiment(const dist::DistributionModel& model, std::size_t n,
                                     const KRule& k_rule, std::size_t reps, RandomSeed seed,
                                     unsigned threads = 0);

/// sup |F_a - F_b| of the two empirical CDFs.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace tailscope
