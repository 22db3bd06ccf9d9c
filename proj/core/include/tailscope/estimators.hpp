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
#include <optional>
#include <string>
#include <vector>

#include "tailscope/empirics.hpp"

namespace tailscope {

/// Hill estimate of the tail index alpha = 1/xi from the m upper order
/// statistics: (mean of log(X_(i) / X_(m+1)), i <= m)^-1. 1 <= m <= n-1.
double hill(const OrderedSample& sample, std::size_t m);

/// Pickands estimate of xi; needs 4m <= n.
double pickands(const OrderedSample& sample, std::size_t m);

/// Moment (Dekkers-Einmahl-de Haan) estimate of xi; 1 <= m <= n-1.
double moment(const OrderedSample& sample, std::size_t m);

/// {(-log(i/m), log(X_(i) / X_(m))) : 1 <= i <= m}.
PointSet2D qq_points_pos(const OrderedSample& sample, std::size_t m);

enum class QQRange {
  kFull,  // i = 1..n
  kTop,   // i = 1..m
};

/// {(X_(i), G<-_{xi,1}(1 - i/(n+1)))}: order statistics against GPD(xi, 1)
/// quantiles at matching levels. xi defaults to pickands(sample, m) and
/// must be negative.
PointSet2D qq_points_neg(const OrderedSample& sample, std::size_t m,
                         std::optional<double> xi_pre = std::nullopt,
                         QQRange range = QQRange::kFull);

enum class PlotKind { kMEPlot, kQQPos, kRaw };

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  /// ME plot: b/(1+b); QQ(xi>0): b; raw: unset.
  std::optional<double> xi_hat;
  double rss = 0.0;
  std::size_t n_points = 0;
};

/// Ordinary least squares line through `points`.
FitResult ls_fit(const PointSet2D& points, PlotKind kind);

/// xi = b / (1 + b) for an ME-plot slope b > -1.
double xi_from_me_slope(double slope);

enum class EstimatorKind { kHill, kPickands, kMoment };

std::string to_string(EstimatorKind kind);

struct TraceEntry {
  std::size_t m;
  double estimate;
};

struct TraceGap {
  std::size_t m;
  std::string reason;
};

struct EstimatorTrace {
  EstimatorKind kind;
  std::vector<TraceEntry> entries;  // m strictly increasing
  std::vector<TraceGap> gaps;       // skipped m with the reason
};

struct TraceOptions {
  std::size_t m_min = 1;
  std::size_t m_max = 0;  // 0: largest admissible m
  std::size_t stride = 1;
};

/// Evaluates the estimator at every admissible m (or every `stride`-th).
/// Needs n >= 8.
EstimatorTrace trace(const OrderedSample& sample, EstimatorKind kind,
                     const TraceOptions& options = {});

}  // namespace tailscope
