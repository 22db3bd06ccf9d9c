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

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tailscope/random.hpp"

namespace tailscope::dist {

/// Shape and scale of a generalized Pareto law.
class ShapeScale {
 public:
  /// Throws Errc::kParameter unless beta > 0 and both values are finite.
  ShapeScale(double xi, double beta);

  double xi() const { return xi_; }
  double beta() const { return beta_; }
  /// +inf when xi >= 0, otherwise -beta / xi.
  double upper_endpoint() const;

 private:
  double xi_;
  double beta_;
};

/// |xi| below this switches to the exponential branch.
inline constexpr double kXiZero = 1e-12;

/// G_{xi,beta}(x). Throws Errc::kDomain outside the support.
double gpd_cdf(double x, const ShapeScale& ss);
/// 1 - G_{xi,beta}(x), computed without cancellation.
double gpd_tail(double x, const ShapeScale& ss);
/// Inverse of gpd_cdf on (0, 1).
double gpd_quantile(double p, const ShapeScale& ss);
/// Inverse of gpd_tail on (0, 1).
double gpd_inverse_tail(double q, const ShapeScale& ss);

struct Gpd {
  ShapeScale params;
};
/// F̄(x) = x^-alpha on [1, inf).
struct Pareto {
  double alpha;
};
struct Beta {
  double a;
  double b;
};
struct Exponential {
  double mean;
};
struct LogNormal {
  double mu;
  double sigma;
};
/// Totally right-skewed stable law with index alpha in (0, 2), scaled so
/// that P(X > x) ~ x^-alpha. Only sampling is offered.
struct StableSkewed {
  double alpha;
};
/// F̄(x) = 400 W(x e^{1/20} / 20)^2 x^-2 on [1, inf).
struct LambertWTail {};
/// Law given by its quantile function on (0, 1).
struct QuantileDefined {
  std::function<double(double)> quantile;
  double left = -std::numeric_limits<double>::infinity();
  double right = std::numeric_limits<double>::infinity();
  bool finite_mean = true;
  std::optional<double> xi;
  std::string label = "quantile";
};

class DistributionModel {
 public:
  using Kind = std::variant<Gpd, Pareto, Beta, Exponential, LogNormal,
                            StableSkewed, LambertWTail, QuantileDefined>;

  static DistributionModel gpd(double xi, double beta);
  static DistributionModel pareto(double alpha);
  static DistributionModel beta(double a, double b);
  static DistributionModel exponential(double mean = 1.0);
  static DistributionModel lognormal(double mu, double sigma);
  static DistributionModel stable(double alpha);
  static DistributionModel lambert_w_tail();
  static DistributionModel quantile_defined(QuantileDefined law);
  /// Piecewise-linear quantile through (probabilities[i], values[i]).
  /// Probabilities strictly increasing in [0, 1], values non-decreasing.
  static DistributionModel tabulated(std::vector<double> probabilities,
                                     std::vector<double> values);

  const Kind& kind() const { return kind_; }
  /// Short spec string, e.g. "pareto:2".
  std::string describe() const;

  double tail(double x) const;
  double cdf(double x) const { return 1.0 - tail(x); }
  /// F̄<-(q) for q in (0, 1]: the x with tail(x) = q.
  double inverse_tail(double q) const;
  /// F<-(p) for p in (0, 1).
  double quantile(double p) const;

  double left_endpoint() const;
  double right_endpoint() const;
  bool has_finite_mean() const;
  /// Extreme-value index xi when known.
  std::optional<double> extreme_value_index() const;
  /// alpha = 1/xi for xi > 0.
  std::optional<double> tail_index() const;
  /// False for laws without an evaluable tail (stable).
  bool has_tail() const;

 private:
  explicit DistributionModel(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// Parses "kind:p1,p2". Kinds: gpd:xi,beta pareto:alpha beta:a,b
/// exp[:mean] lognormal:mu,sigma stable:alpha lambertw (alias nonstd).
/// Throws Errc::kConfiguration on malformed input.
DistributionModel parse_model(const std::string& spec);

/// M(u) = E[X - u | X > u]. Closed form for GPD and exponential, quadrature
/// otherwise.
double theoretical_me(const DistributionModel& model, double u);
/// Quadrature route for every kind, including GPD.
double theoretical_me_quadrature(const DistributionModel& model, double u);

/// P(X - u <= x | X > u).
double excess_cdf(const DistributionModel& model, double u, double x);

/// b(t) = F<-(1 - 1/t).
double quantile_b(const DistributionModel& model, double t);

std::vector<double> sample(const DistributionModel& model, std::size_t n,
                           RandomSeed seed);
/// One draw using `rng`.
double draw(const DistributionModel& model, CounterRng& rng);

/// E[X 1{X <= t}]. Closed form where available, otherwise quadrature.
double truncated_mean(const DistributionModel& model, double t);
double truncated_mean_quadrature(const DistributionModel& model, double t);

/// Tail of the Lambert-W law, x >= 1.
double nonstd_tail(double x);
/// Its inverse p^{-1/2}(1 - 10 ln p), p in (0, 1].
double nonstd_quantile(double p);

/// Stable limits of the xi >= 1 normalizations.
class StableLaw {
 public:
  enum class Variant { kPositiveStable, kSkewedUnitIndex };

  /// S_{1/xi}, xi > 1; index 1/xi in (0, 1).
  static StableLaw positive_stable(double xi);
  /// S_1 with its logarithmic term and drift.
  static StableLaw skewed_unit_index();

  Variant variant() const { return variant_; }
  double index() const { return index_; }

 private:
  StableLaw(Variant variant, double index) : variant_(variant), index_(index) {}
  Variant variant_;
  double index_;
};

std::complex<double> stable_cf(double t, const StableLaw& law);
std::vector<double> sample(const StableLaw& law, std::size_t n, RandomSeed seed);
double draw(const StableLaw& law, CounterRng& rng);

/// Drift of S_1: integral over (0, inf) of sin(x)/x^2 - 1/(x(1+x)).
double skewed_unit_drift();

/// Totally right-skewed stable draw with index alpha in (0, 2), alpha != 1,
/// and characteristic function
/// exp{-Gamma(1-alpha) cos(pi alpha/2) |t|^alpha [1 - i sgn(t) tan(pi alpha/2)]}.
double draw_positive_stable(double alpha, CounterRng& rng);

}  // namespace tailscope::dist
