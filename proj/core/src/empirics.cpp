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


#include "tailscope/empirics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tailscope/error.hpp"
#include "tailscope/format.hpp"

namespace tailscope {
namespace {

void CheckK(const OrderedSample& sample, std::size_t k) {
  if (k < 2 || k > sample.n()) {
    throw Error(Errc::kRange, "k = " + std::to_string(k) + " outside [2, " +
                                  std::to_string(sample.n()) + "]");
  }
}

void CheckScale(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(Errc::kNormalization,
                std::string(name) + " must be positive and finite, got " + format_shortest(value));
  }
}

// M̂(X_(i)) for every i in [lo, hi], sharing one search per point.
template <class Emit>
void ForEachMe(const OrderedSample& s, std::size_t lo, std::size_t hi, Emit emit) {
  for (std::size_t i = lo; i <= hi; ++i) {
    const double u = s.at(i);
    emit(i, u, empirical_me(s, u));
  }
}

}  // namespace

OrderedSample::OrderedSample(std::vector<double> data) : values_(std::move(data)) {
  if (values_.size() < 2) {
    throw Error(Errc::kInsufficientData,
                "need at least 2 observations, got " + std::to_string(values_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error(Errc::kDomain, "sample contains a non-finite value");
  }
  std::stable_sort(values_.begin(), values_.end(), std::greater<>());
  prefix_.resize(values_.size() + 1);
  prefix_[0] = 0.0L;
  for (std::size_t i = 0; i < values_.size(); ++i) prefix_[i + 1] = prefix_[i] + values_[i];
}

std::size_t OrderedSample::count_above(double u) const {
  const auto it =
      std::partition_point(values_.begin(), values_.end(), [u](double x) { return x > u; });
  return static_cast<std::size_t>(it - values_.begin());
}

OrderedSample order_statistics(std::vector<double> data) {
  return OrderedSample(std::move(data));
}

double empirical_me(const OrderedSample& sample, double u) {
  const std::size_t c = sample.count_above(u);
  if (c == 0) {
    throw Error(Errc::kEmptyExceedance, "no observation exceeds u = " + format_shortest(u));
  }
  const long double mean = sample.sum_top(c) / static_cast<long double>(c);
  return static_cast<double>(mean - static_cast<long double>(u));
}

PointSet2D me_plot(const OrderedSample& sample, std::size_t i_min, std::size_t i_max) {
  if (i_min < 2 || i_min > i_max || i_max > sample.n()) {
    throw Error(Errc::kRange, "trim " + std::to_string(i_min) + ":" + std::to_string(i_max) +
                                  " violates 2 <= i_min <= i_max <= n = " +
                                  std::to_string(sample.n()));
  }
  PointSet2D out;
  out.reserve(i_max - i_min + 1);
  for (std::size_t i = i_min; i <= i_max; ++i) {
    const double u = sample.at(i);
    try {
      out.push_back({u, empirical_me(sample, u)});
    } catch (const Error& e) {
      if (e.code() != Errc::kEmptyExceedance) throw;
      throw Error(Errc::kEmptyExceedance,
                  "order statistic " + std::to_string(i) + " (value " + format_shortest(u) +
                      ") has no strict exceedance");
    }
  }
  return out;
}

double tail_measure(const OrderedSample& sample, std::size_t k, double x) {
  return TailMeasureView(sample, k)(x);
}

TailMeasureView::TailMeasureView(const OrderedSample& sample, std::size_t k)
    : sample_(&sample), k_(k) {
  CheckK(sample, k);
  if (!(sample.at(k) > 0.0)) {
    throw Error(Errc::kNormalization,
                "X_(k) = " + format_shortest(sample.at(k)) + " must be positive");
  }
}

double TailMeasureView::operator()(double x) const {
  const double xk = sample_->at(k_);
  const auto& v = sample_->values_desc();
  const auto it = std::partition_point(v.begin(), v.end(), [&](double y) { return y / xk > x; });
  return static_cast<double>(it - v.begin()) / static_cast<double>(k_);
}

PointSet2D normalize_positive(const OrderedSample& sample, std::size_t k) {
  CheckK(sample, k);
  const double xk = sample.at(k);
  CheckScale(xk, "X_(k)");
  PointSet2D out;
  out.reserve(k - 1);
  ForEachMe(sample, 2, k, [&](std::size_t, double x, double me) {
    out.push_back({x / xk, me / xk});
  });
  return out;
}

PointSet2D normalize_heavy(const OrderedSample& sample, std::size_t k, double b_nk,
                           double b_n) {
  CheckK(sample, k);
  CheckScale(b_nk, "b(n/k)");
  CheckScale(b_n, "b(n)");
  const double y_scale = static_cast<double>(k) / b_n;
  PointSet2D out;
  out.reserve(k - 1);
  ForEachMe(sample, 2, k, [&](std::size_t, double x, double me) {
    out.push_back({x / b_nk, me * y_scale});
  });
  return out;
}

PointSet2D normalize_xi1(const OrderedSample& sample, std::size_t k, double b_nk,
                         double b_n, double c_nk) {
  CheckK(sample, k);
  CheckScale(b_nk, "b(n/k)");
  CheckScale(b_n, "b(n)");
  const double shift = static_cast<double>(k) * c_nk / b_n;
  PointSet2D out;
  out.reserve(k - 1);
  ForEachMe(sample, 2, k, [&](std::size_t i, double x, double me) {
    out.push_back({x / b_nk, me / b_nk - shift / static_cast<double>(i)});
  });
  return out;
}

PointSet2D normalize_negative(const OrderedSample& sample, std::size_t k) {
  CheckK(sample, k);
  const double xk = sample.at(k);
  const double range = sample.at(1) - xk;
  if (!(range > 0.0)) {
    throw Error(Errc::kDegenerateRange, "X_(1) = X_(k); nothing to normalize by");
  }
  PointSet2D out;
  out.reserve(k - 1);
  ForEachMe(sample, 2, k, [&](std::size_t, double x, double me) {
    out.push_back({(x - xk) / range, me / range});
  });
  return out;
}

PointSet2D normalize_zero(const OrderedSample& sample, std::size_t k) {
  CheckK(sample, k);
  const double xk = sample.at(k);
  const double range = sample.at((k + 1) / 2) - xk;
  if (!(range > 0.0)) {
    throw Error(Errc::kDegenerateRange, "X_(ceil(k/2)) = X_(k); nothing to normalize by");
  }
  PointSet2D out;
  out.reserve(k - 1);
  ForEachMe(sample, 2, k, [&](std::size_t, double x, double me) {
    out.push_back({(x - xk) / range, me / range});
  });
  return out;
}

double centering_cnk(const dist::DistributionModel& model, std::size_t n, std::size_t k) {
  if (k < 1 || k > n) {
    throw Error(Errc::kRange, "centering needs 1 <= k <= n");
  }
  if (k == 1) return 0.0;
  const double nd = static_cast<double>(n);
  const double b_n = dist::quantile_b(model, nd);
  const double b_nk = dist::quantile_b(model, nd / static_cast<double>(k));
  return nd * (dist::truncated_mean(model, b_n) - dist::truncated_mean(model, b_nk));
}

KRule KRule::power(double exponent) {
  if (!(exponent > 0.0 && exponent < 1.0)) {
    throw Error(Errc::kConfiguration, "k-rule exponent must lie in (0, 1)");
  }
  return KRule(exponent, 0);
}

KRule KRule::fixed(std::size_t k) {
  if (k < 2) throw Error(Errc::kConfiguration, "fixed k must be at least 2");
  return KRule(0.0, k);
}

KRule KRule::parse(const std::string& text) {
  if (text == "sqrt") return power(0.5);
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? head : text.substr(colon + 1);
  double v = 0.0;
  if (!parse_number(arg, v)) throw Error(Errc::kConfiguration, "bad k-rule '" + text + "'");
  if (colon != std::string::npos && head == "pow") return power(v);
  if (colon == std::string::npos || head == "fixed") {
    if (v != std::floor(v) || v < 2) {
      throw Error(Errc::kConfiguration, "fixed k must be an integer >= 2 in '" + text + "'");
    }
    return fixed(static_cast<std::size_t>(v));
  }
  throw Error(Errc::kConfiguration, "bad k-rule '" + text + "'");
}

std::size_t KRule::operator()(std::size_t n) const {
  std::size_t k = fixed_;
  if (fixed_ == 0) {
    // The nudge keeps exact powers (n = 10^4, exponent 1/2) from rounding down.
    k = static_cast<std::size_t>(
        std::floor(std::pow(static_cast<double>(n), exponent_) * (1.0 + 1e-12)));
  }
  return std::clamp<std::size_t>(k, 2, std::max<std::size_t>(n, 2));
}

std::string KRule::describe() const {
  if (fixed_ != 0) return "fixed:" + std::to_string(fixed_);
  return "pow:" + format_shortest(exponent_);
}

std::size_t default_trim_min(std::size_t n) {
  return std::max<std::size_t>(2, n / 200);
}

double correlation(const PointSet2D& points) {
  const double m = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mx) * (p.x - mx);
    syy += (p.y - my) * (p.y - my);
    sxy += (p.x - mx) * (p.y - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace tailscope
