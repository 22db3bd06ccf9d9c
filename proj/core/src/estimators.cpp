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


#include "tailscope/estimators.hpp"

#include <cmath>
#include <numbers>

#include "tailscope/dist.hpp"
#include "tailscope/error.hpp"
#include "tailscope/format.hpp"

namespace tailscope {
namespace {

void CheckUpper(const OrderedSample& s, std::size_t m, const char* who) {
  if (m < 1 || m >= s.n()) {
    throw Error(Errc::kRange, std::string(who) + ": m = " + std::to_string(m) +
                                  " outside [1, " + std::to_string(s.n() - 1) + "]");
  }
  if (!(s.at(m + 1) > 0.0)) {
    throw Error(Errc::kDomain, std::string(who) + ": X_(m+1) = " +
                                   format_shortest(s.at(m + 1)) + " is not positive");
  }
}

// Exact tie conditions under which the log-moment estimators break down.
const char* HillDegeneracy(const OrderedSample& s, std::size_t m) {
  return s.at(1) == s.at(m + 1) ? "top m+1 order statistics equal" : nullptr;
}

const char* MomentDegeneracy(const OrderedSample& s, std::size_t m) {
  if (s.at(1) == s.at(m + 1)) return "H2 = 0 (top m+1 order statistics equal)";
  if (s.at(1) == s.at(m)) return "H1^2 = H2 (top m order statistics equal)";
  return nullptr;
}

const char* PickandsDegeneracy(const OrderedSample& s, std::size_t m) {
  const double upper = s.at(m) - s.at(2 * m);
  const double lower = s.at(2 * m) - s.at(4 * m);
  if (!(lower > 0.0)) return "X_(2m) = X_(4m)";
  if (!(upper > 0.0)) return "X_(m) = X_(2m)";
  return nullptr;
}

double MomentFromH(double h1, double h2) {
  return h1 + 1.0 - 0.5 / (1.0 - h1 * h1 / h2);
}

// Prefix sums of log X_(i) and its square over the positive order
// statistics, for O(1) Hill and moment evaluation at each m.
class LogPrefix {
 public:
  explicit LogPrefix(const OrderedSample& s) {
    s1_.push_back(0.0L);
    s2_.push_back(0.0L);
    for (std::size_t i = 1; i <= s.n() && s.at(i) > 0.0; ++i) {
      const long double y = std::log(static_cast<long double>(s.at(i)));
      logs_.push_back(y);
      s1_.push_back(s1_.back() + y);
      s2_.push_back(s2_.back() + y * y);
    }
  }

  std::size_t positive() const { return logs_.size(); }

  // H1 and H2 relative to log X_(m+1).
  std::pair<double, double> h(std::size_t m) const {
    const long double l = logs_[m];
    const long double md = static_cast<long double>(m);
    const long double mean1 = s1_[m] / md;
    const long double mean2 = s2_[m] / md;
    const long double h1 = mean1 - l;
    const long double h2 = mean2 - 2.0L * l * mean1 + l * l;
    return {static_cast<double>(h1), static_cast<double>(h2)};
  }

 private:
  std::vector<long double> logs_;
  std::vector<long double> s1_;
  std::vector<long double> s2_;
};

}  // namespace

double hill(const OrderedSample& sample, std::size_t m) {
  CheckUpper(sample, m, "hill");
  if (const char* why = HillDegeneracy(sample, m)) throw Error(Errc::kDegenerate, why);
  const double base = sample.at(m + 1);
  double sum = 0.0;
  for (std::size_t i = 1; i <= m; ++i) sum += std::log(sample.at(i) / base);
  return static_cast<double>(m) / sum;
}

double pickands(const OrderedSample& sample, std::size_t m) {
  if (m < 1 || 4 * m > sample.n()) {
    throw Error(Errc::kRange, "pickands: m = " + std::to_string(m) + " outside [1, " +
                                  std::to_string(sample.n() / 4) + "]");
  }
  if (const char* why = PickandsDegeneracy(sample, m)) throw Error(Errc::kDegenerate, why);
  const double upper = sample.at(m) - sample.at(2 * m);
  const double lower = sample.at(2 * m) - sample.at(4 * m);
  return std::log(upper / lower) / std::numbers::ln2;
}

double moment(const OrderedSample& sample, std::size_t m) {
  CheckUpper(sample, m, "moment");
  if (const char* why = MomentDegeneracy(sample, m)) throw Error(Errc::kDegenerate, why);
  const double base = sample.at(m + 1);
  double h1 = 0.0;
  double h2 = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    const double y = std::log(sample.at(i) / base);
    h1 += y;
    h2 += y * y;
  }
  h1 /= static_cast<double>(m);
  h2 /= static_cast<double>(m);
  return MomentFromH(h1, h2);
}

PointSet2D qq_points_pos(const OrderedSample& sample, std::size_t m) {
  if (m < 1 || m > sample.n()) {
    throw Error(Errc::kRange, "qq: m = " + std::to_string(m) + " outside [1, n]");
  }
  const double base = sample.at(m);
  if (!(base > 0.0)) {
    throw Error(Errc::kDomain, "qq: X_(m) = " + format_shortest(base) + " is not positive");
  }
  const double md = static_cast<double>(m);
  PointSet2D out;
  out.reserve(m);
  for (std::size_t i = 1; i <= m; ++i) {
    out.push_back({-std::log(static_cast<double>(i) / md), std::log(sample.at(i) / base)});
  }
  return out;
}

PointSet2D qq_points_neg(const OrderedSample& sample, std::size_t m,
                         std::optional<double> xi_pre, QQRange range) {
  if (m < 1 || m > sample.n()) {
    throw Error(Errc::kRange, "qq: m = " + std::to_string(m) + " outside [1, n]");
  }
  const double xi = xi_pre ? *xi_pre : pickands(sample, m);
  if (!(xi < 0.0)) {
    throw Error(Errc::kParameter,
                "negative-xi QQ plot needs xi < 0, got " + format_shortest(xi));
  }
  const dist::ShapeScale ss(xi, 1.0);
  const std::size_t n = sample.n();
  const std::size_t last = range == QQRange::kFull ? n : m;
  const double denom = static_cast<double>(n + 1);
  PointSet2D out;
  out.reserve(last);
  for (std::size_t i = 1; i <= last; ++i) {
    const double p = 1.0 - static_cast<double>(i) / denom;
    out.push_back({sample.at(i), dist::gpd_quantile(p, ss)});
  }
  return out;
}

double xi_from_me_slope(double slope) {
  if (!(slope > -1.0)) {
    throw Error(Errc::kDomain, "ME slope must exceed -1, got " + format_shortest(slope));
  }
  return slope / (1.0 + slope);
}

FitResult ls_fit(const PointSet2D& points, PlotKind kind) {
  if (points.size() < 2) {
    throw Error(Errc::kSingularDesign,
                "least squares needs at least 2 points, got " + std::to_string(points.size()));
  }
  const double n = static_cast<double>(points.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto& p : points) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : points) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
  }
  if (!(sxx > 0.0)) throw Error(Errc::kSingularDesign, "all x coordinates are equal");

  FitResult fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.n_points = points.size();
  for (const auto& p : points) {
    const double r = p.y - (fit.intercept + fit.slope * p.x);
    fit.rss += r * r;
  }
  if (kind == PlotKind::kMEPlot && fit.slope > -1.0) fit.xi_hat = xi_from_me_slope(fit.slope);
  if (kind == PlotKind::kQQPos) fit.xi_hat = fit.slope;
  return fit;
}

std::string to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kHill: return "hill";
    case EstimatorKind::kPickands: return "pickands";
    case EstimatorKind::kMoment: return "moment";
  }
  return "unknown";
}

EstimatorTrace trace(const OrderedSample& sample, EstimatorKind kind,
                     const TraceOptions& options) {
  const std::size_t n = sample.n();
  if (n < 8) {
    throw Error(Errc::kInsufficientData, "trace needs n >= 8, got " + std::to_string(n));
  }
  const std::size_t cap = kind == EstimatorKind::kPickands ? n / 4 : n - 1;
  const std::size_t m_max = options.m_max == 0 ? cap : std::min(options.m_max, cap);
  const std::size_t stride = std::max<std::size_t>(1, options.stride);

  EstimatorTrace out{kind, {}, {}};
  const LogPrefix logs(sample);
  for (std::size_t m = std::max<std::size_t>(1, options.m_min); m <= m_max; m += stride) {
    if (kind == EstimatorKind::kPickands) {
      if (const char* why = PickandsDegeneracy(sample, m)) {
        out.gaps.push_back({m, why});
        continue;
      }
      const double upper = sample.at(m) - sample.at(2 * m);
      const double lower = sample.at(2 * m) - sample.at(4 * m);
      out.entries.push_back({m, std::log(upper / lower) / std::numbers::ln2});
      continue;
    }
    if (m >= logs.positive()) {
      out.gaps.push_back({m, "X_(m+1) is not positive"});
      continue;
    }
    const bool is_hill = kind == EstimatorKind::kHill;
    const char* why = is_hill ? HillDegeneracy(sample, m) : MomentDegeneracy(sample, m);
    if (why != nullptr) {
      out.gaps.push_back({m, why});
      continue;
    }
    const auto [h1, h2] = logs.h(m);
    out.entries.push_back({m, is_hill ? 1.0 / h1 : MomentFromH(h1, h2)});
  }
  return out;
}

}  // namespace tailscope
