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
#include <string>
#include <vector>

#include "tailscope/dist.hpp"

namespace tailscope {

struct Point2D {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

/// Finite planar point set; order carries no meaning.
using PointSet2D = std::vector<Point2D>;

/// Sample sorted descending: at(1) >= at(2) >= ... >= at(n).
class OrderedSample {
 public:
  /// Sorts `data` descending. Throws Errc::kInsufficientData for fewer than
  /// two values and Errc::kDomain for non-finite values.
  explicit OrderedSample(std::vector<double> data);

  std::size_t n() const { return values_.size(); }
  const std::vector<double>& values_desc() const { return values_; }
  /// X_(i), 1-based.
  double at(std::size_t i) const { return values_[i - 1]; }

  /// #{X_j > u}.
  std::size_t count_above(double u) const;
  /// X_(1) + ... + X_(j), accumulated in extended precision.
  long double sum_top(std::size_t j) const { return prefix_[j]; }

 private:
  std::vector<double> values_;
  std::vector<long double> prefix_;
};

OrderedSample order_statistics(std::vector<double> data);

/// M̂(u): average excess over the observations strictly above u.
/// Throws Errc::kEmptyExceedance when nothing exceeds u.
double empirical_me(const OrderedSample& sample, double u);

/// {(X_(i), M̂(X_(i))) : i_min <= i <= i_max}; M̂ uses the full sample.
PointSet2D me_plot(const OrderedSample& sample, std::size_t i_min, std::size_t i_max);

/// ν̂_n(x, inf] = #{i : X_i / X_(k) > x} / k.
double tail_measure(const OrderedSample& sample, std::size_t k, double x);

/// Tail empirical measure bound to one sample and k. The sample must
/// outlive the view.
class TailMeasureView {
 public:
  TailMeasureView(const OrderedSample& sample, std::size_t k);

  std::size_t k() const { return k_; }
  double operator()(double x) const;

 private:
  const OrderedSample* sample_;
  std::size_t k_;
};

/// (X_(i), M̂(X_(i))) / X_(k), i = 2..k.
PointSet2D normalize_positive(const OrderedSample& sample, std::size_t k);
/// (X_(i) / b(n/k), M̂(X_(i)) k / b(n)), i = 2..k.
PointSet2D normalize_heavy(const OrderedSample& sample, std::size_t k, double b_nk,
                           double b_n);
/// (X_(i) / b(n/k), M̂(X_(i)) / b(n/k) - k C / (i b(n))), i = 2..k.
/// c_nk = 0 gives the uncentered construction.
PointSet2D normalize_xi1(const OrderedSample& sample, std::size_t k, double b_nk,
                         double b_n, double c_nk);
/// (X_(i) - X_(k), M̂(X_(i))) / (X_(1) - X_(k)), i = 2..k.
PointSet2D normalize_negative(const OrderedSample& sample, std::size_t k);
/// (X_(i) - X_(k), M̂(X_(i))) / (X_(ceil(k/2)) - X_(k)), i = 2..k.
PointSet2D normalize_zero(const OrderedSample& sample, std::size_t k);

/// n (E[X 1{X <= b(n)}] - E[X 1{X <= b(n/k)}]).
double centering_cnk(const dist::DistributionModel& model, std::size_t n, std::size_t k);

/// Number of upper order statistics used at sample size n.
class KRule {
 public:
  /// floor(n^exponent).
  static KRule power(double exponent);
  static KRule fixed(std::size_t k);
  /// "pow:0.7", "sqrt", "fixed:500" or a bare integer.
  static KRule parse(const std::string& text);

  /// Clamped to [2, n].
  std::size_t operator()(std::size_t n) const;
  std::string describe() const;

 private:
  KRule(double exponent, std::size_t fixed) : exponent_(exponent), fixed_(fixed) {}
  double exponent_;
  std::size_t fixed_;
};

/// floor(0.005 n), at least 2.
std::size_t default_trim_min(std::size_t n);

/// Pearson correlation of the coordinates; NaN with no spread.
double correlation(const PointSet2D& points);

}  // namespace tailscope
