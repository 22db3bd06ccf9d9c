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


#include "tailscope/dist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "tailscope/error.hpp"
#include "tailscope/format.hpp"
#include "tailscope/numeric.hpp"

namespace tailscope::dist {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void RequirePositive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(Errc::kParameter, std::string(name) + " must be positive and finite, got " +
                                      format_shortest(value));
  }
}

std::string Interval(double lo, double hi) {
  return "[" + format_shortest(lo) + ", " + format_shortest(hi) + "]";
}

void CheckGpdSupport(double x, const ShapeScale& ss) {
  const double hi = ss.upper_endpoint();
  if (std::isnan(x) || x < 0.0 || x > hi) {
    throw Error(Errc::kDomain, "x = " + format_shortest(x) +
                                   " outside the GPD support " + Interval(0.0, hi));
  }
}

// -log(1 + xi x / beta) / xi, the log tail.
double GpdLogTail(double x, const ShapeScale& ss) {
  if (std::abs(ss.xi()) < kXiZero) return -x / ss.beta();
  return -std::log1p(ss.xi() * x / ss.beta()) / ss.xi();
}

// x = u + c((1 - s)^-m - 1) flattens the tail; m is picked so an x^-alpha
// tail leaves an integrand vanishing linearly at s = 1.
double SubstitutionPower(const DistributionModel& model) {
  const auto alpha = model.tail_index();
  if (!alpha || *alpha <= 1.0) return 1.0;
  return std::clamp(2.0 / (*alpha - 1.0), 1.0, 64.0);
}

// Integral of the tail over [a, b], a < b, b possibly infinite.
double TailIntegral(const DistributionModel& model, double a, double b) {
  auto tail = [&](double x) { return model.tail(x); };
  if (std::isinf(b)) {
    return numeric::integrate_to_infinity(tail, a, SubstitutionPower(model),
                                          std::max(1.0, std::abs(a)));
  }
  if (a > 0.0 && b / a > 16.0) {
    // Log scale keeps power-law integrands smooth over many decades.
    auto g = [&](double y) {
      const double x = std::exp(y);
      return model.tail(x) * x;
    };
    return numeric::integrate(g, std::log(a), std::log(b));
  }
  return numeric::integrate(tail, a, b);
}

double QuantileDefinedTail(const QuantileDefined& law, double x) {
  if (x < law.left) return 1.0;
  if (x >= law.right) return 0.0;
  // F(x) = sup{p : Q(p) <= x}, located by bisection on p.
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 80 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (law.quantile(mid) <= x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 1.0 - lo;
}

std::vector<double> ParseParams(const std::string& text, const std::string& spec) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!parse_number(item, v)) {
      throw Error(Errc::kConfiguration, "bad number '" + item + "' in model spec '" + spec + "'");
    }
    out.push_back(v);
  }
  return out;
}

}  // namespace

ShapeScale::ShapeScale(double xi, double beta) : xi_(xi), beta_(beta) {
  if (!std::isfinite(xi)) throw Error(Errc::kParameter, "GPD shape must be finite");
  RequirePositive(beta, "GPD scale beta");
}

double ShapeScale::upper_endpoint() const {
  return xi_ >= 0.0 || std::abs(xi_) < kXiZero ? kInf : -beta_ / xi_;
}

double gpd_tail(double x, const ShapeScale& ss) {
  CheckGpdSupport(x, ss);
  if (std::isinf(x)) return 0.0;
  return std::exp(GpdLogTail(x, ss));
}

double gpd_cdf(double x, const ShapeScale& ss) {
  CheckGpdSupport(x, ss);
  if (std::isinf(x)) return 1.0;
  return -std::expm1(GpdLogTail(x, ss));
}

double gpd_inverse_tail(double q, const ShapeScale& ss) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw Error(Errc::kDomain, "tail probability " + format_shortest(q) + " outside (0, 1]");
  }
  const double log_q = std::log(q);
  if (std::abs(ss.xi()) < kXiZero) return -ss.beta() * log_q;
  return ss.beta() * std::expm1(-ss.xi() * log_q) / ss.xi();
}

double gpd_quantile(double p, const ShapeScale& ss) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(Errc::kDomain, "probability " + format_shortest(p) + " outside (0, 1)");
  }
  const double log_q = std::log1p(-p);
  if (std::abs(ss.xi()) < kXiZero) return -ss.beta() * log_q;
  return ss.beta() * std::expm1(-ss.xi() * log_q) / ss.xi();
}

double nonstd_tail(double x) {
  if (std::isnan(x) || x < 1.0) {
    throw Error(Errc::kDomain, "Lambert-W tail needs x >= 1, got " + format_shortest(x));
  }
  if (std::isinf(x)) return 0.0;
  const double w = numeric::lambert_w(x * std::exp(0.05) / 20.0);
  return std::min(1.0, 400.0 * w * w / (x * x));
}

double nonstd_quantile(double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw Error(Errc::kDomain, "Lambert-W quantile needs p in (0, 1], got " + format_shortest(p));
  }
  return (1.0 - 10.0 * std::log(p)) / std::sqrt(p);
}

DistributionModel DistributionModel::gpd(double xi, double beta) {
  return DistributionModel(Gpd{ShapeScale(xi, beta)});
}

DistributionModel DistributionModel::pareto(double alpha) {
  RequirePositive(alpha, "Pareto alpha");
  return DistributionModel(Pareto{alpha});
}

DistributionModel DistributionModel::beta(double a, double b) {
  RequirePositive(a, "Beta a");
  RequirePositive(b, "Beta b");
  return DistributionModel(Beta{a, b});
}

DistributionModel DistributionModel::exponential(double mean) {
  RequirePositive(mean, "exponential mean");
  return DistributionModel(Exponential{mean});
}

DistributionModel DistributionModel::lognormal(double mu, double sigma) {
  if (!std::isfinite(mu)) throw Error(Errc::kParameter, "lognormal mu must be finite");
  RequirePositive(sigma, "lognormal sigma");
  return DistributionModel(LogNormal{mu, sigma});
}

DistributionModel DistributionModel::stable(double alpha) {
  if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0) {
    throw Error(Errc::kParameter,
                "stable index must lie in (0, 2) and differ from 1, got " +
                    format_shortest(alpha));
  }
  return DistributionModel(StableSkewed{alpha});
}

DistributionModel DistributionModel::lambert_w_tail() {
  return DistributionModel(LambertWTail{});
}

DistributionModel DistributionModel::quantile_defined(QuantileDefined law) {
  if (!law.quantile) throw Error(Errc::kParameter, "quantile function is empty");
  if (!(law.left <= law.right)) throw Error(Errc::kParameter, "left endpoint exceeds right");
  return DistributionModel(std::move(law));
}

DistributionModel DistributionModel::tabulated(std::vector<double> probabilities,
                                               std::vector<double> values) {
  if (probabilities.size() != values.size() || probabilities.size() < 2) {
    throw Error(Errc::kParameter, "tabulated quantile needs >= 2 matching (p, x) pairs");
  }
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (!(probabilities[i] >= 0.0 && probabilities[i] <= 1.0) || !std::isfinite(values[i])) {
      throw Error(Errc::kParameter, "tabulated entries must be finite with p in [0, 1]");
    }
    if (i > 0 && (!(probabilities[i] > probabilities[i - 1]) || values[i] < values[i - 1])) {
      throw Error(Errc::kParameter,
                  "tabulated probabilities must increase and values must not decrease");
    }
  }
  QuantileDefined law;
  law.left = values.front();
  law.right = values.back();
  law.label = "tabulated";
  law.quantile = [p = std::move(probabilities), v = std::move(values)](double u) {
    if (u <= p.front()) return v.front();
    if (u >= p.back()) return v.back();
    const auto it = std::upper_bound(p.begin(), p.end(), u);
    const std::size_t j = static_cast<std::size_t>(it - p.begin());
    const double w = (u - p[j - 1]) / (p[j] - p[j - 1]);
    return v[j - 1] + w * (v[j] - v[j - 1]);
  };
  return DistributionModel(std::move(law));
}

std::string DistributionModel::describe() const {
  return std::visit(
      Overloaded{
          [](const Gpd& d) {
            return "gpd:" + format_shortest(d.params.xi()) + "," +
                   format_shortest(d.params.beta());
          },
          [](const Pareto& d) { return "pareto:" + format_shortest(d.alpha); },
          [](const Beta& d) {
            return "beta:" + format_shortest(d.a) + "," + format_shortest(d.b);
          },
          [](const Exponential& d) { return "exp:" + format_shortest(d.mean); },
          [](const LogNormal& d) {
            return "lognormal:" + format_shortest(d.mu) + "," + format_shortest(d.sigma);
          },
          [](const StableSkewed& d) { return "stable:" + format_shortest(d.alpha); },
          [](const LambertWTail&) { return std::string("lambertw"); },
          [](const QuantileDefined& d) { return d.label; },
      },
      kind_);
}

double DistributionModel::tail(double x) const {
  if (std::isnan(x)) throw Error(Errc::kDomain, "tail evaluated at NaN");
  return std::visit(
      Overloaded{
          [x](const Gpd& d) {
            if (x <= 0.0) return 1.0;
            if (x >= d.params.upper_endpoint()) return 0.0;
            return gpd_tail(x, d.params);
          },
          [x](const Pareto& d) { return x <= 1.0 ? 1.0 : std::pow(x, -d.alpha); },
          [x](const Beta& d) {
            if (x <= 0.0) return 1.0;
            if (x >= 1.0) return 0.0;
            return boost::math::ibetac(d.a, d.b, x);
          },
          [x](const Exponential& d) { return x <= 0.0 ? 1.0 : std::exp(-x / d.mean); },
          [x](const LogNormal& d) {
            if (x <= 0.0) return 1.0;
            if (std::isinf(x)) return 0.0;
            return 0.5 * std::erfc((std::log(x) - d.mu) / (d.sigma * std::numbers::sqrt2));
          },
          [](const StableSkewed&) -> double {
            throw Error(Errc::kUnsupported, "stable laws offer no closed tail function");
          },
          [x](const LambertWTail&) { return x <= 1.0 ? 1.0 : nonstd_tail(x); },
          [x](const QuantileDefined& d) { return QuantileDefinedTail(d, x); },
      },
      kind_);
}

double DistributionModel::inverse_tail(double q) const {
  if (!(q > 0.0 && q <= 1.0)) {
    throw Error(Errc::kDomain, "tail probability " + format_shortest(q) + " outside (0, 1]");
  }
  if (q == 1.0 && !std::holds_alternative<StableSkewed>(kind_)) return left_endpoint();
  return std::visit(
      Overloaded{
          [q](const Gpd& d) { return gpd_inverse_tail(q, d.params); },
          [q](const Pareto& d) { return std::pow(q, -1.0 / d.alpha); },
          [q](const Beta& d) { return boost::math::ibetac_inv(d.a, d.b, q); },
          [q](const Exponential& d) { return -d.mean * std::log(q); },
          [q](const LogNormal& d) {
            return std::exp(d.mu + d.sigma * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q));
          },
          [](const StableSkewed&) -> double {
            throw Error(Errc::kUnsupported, "stable laws offer no closed quantile function");
          },
          [q](const LambertWTail&) { return nonstd_quantile(q); },
          [q](const QuantileDefined& d) { return d.quantile(1.0 - q); },
      },
      kind_);
}

double DistributionModel::quantile(double p) const {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(Errc::kDomain, "probability " + format_shortest(p) + " outside (0, 1)");
  }
  return std::visit(
      Overloaded{
          [p](const Gpd& d) { return gpd_quantile(p, d.params); },
          [p](const Pareto& d) { return std::exp(-std::log1p(-p) / d.alpha); },
          [p](const Beta& d) { return boost::math::ibeta_inv(d.a, d.b, p); },
          [p](const Exponential& d) { return -d.mean * std::log1p(-p); },
          [p](const LogNormal& d) {
            return std::exp(d.mu - d.sigma * std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p));
          },
          [](const StableSkewed&) -> double {
            throw Error(Errc::kUnsupported, "stable laws offer no closed quantile function");
          },
          [p](const LambertWTail&) { return nonstd_quantile(1.0 - p); },
          [p](const QuantileDefined& d) { return d.quantile(p); },
      },
      kind_);
}

double DistributionModel::left_endpoint() const {
  return std::visit(
      Overloaded{
          [](const Pareto&) { return 1.0; },
          [](const LambertWTail&) { return 1.0; },
          [](const StableSkewed& d) { return d.alpha < 1.0 ? 0.0 : -kInf; },
          [](const QuantileDefined& d) { return d.left; },
          [](const auto&) { return 0.0; },
      },
      kind_);
}

double DistributionModel::right_endpoint() const {
  return std::visit(
      Overloaded{
          [](const Gpd& d) { return d.params.upper_endpoint(); },
          [](const Beta&) { return 1.0; },
          [](const QuantileDefined& d) { return d.right; },
          [](const auto&) { return kInf; },
      },
      kind_);
}

bool DistributionModel::has_finite_mean() const {
  return std::visit(
      Overloaded{
          [](const Gpd& d) { return d.params.xi() < 1.0; },
          [](const Pareto& d) { return d.alpha > 1.0; },
          [](const StableSkewed& d) { return d.alpha > 1.0; },
          [](const QuantileDefined& d) { return d.finite_mean; },
          [](const auto&) { return true; },
      },
      kind_);
}

std::optional<double> DistributionModel::extreme_value_index() const {
  return std::visit(
      Overloaded{
          [](const Gpd& d) -> std::optional<double> { return d.params.xi(); },
          [](const Pareto& d) -> std::optional<double> { return 1.0 / d.alpha; },
          [](const Beta& d) -> std::optional<double> { return -1.0 / d.b; },
          [](const Exponential&) -> std::optional<double> { return 0.0; },
          [](const LogNormal&) -> std::optional<double> { return 0.0; },
          [](const StableSkewed& d) -> std::optional<double> { return 1.0 / d.alpha; },
          [](const LambertWTail&) -> std::optional<double> { return 0.5; },
          [](const QuantileDefined& d) { return d.xi; },
      },
      kind_);
}

std::optional<double> DistributionModel::tail_index() const {
  const auto xi = extreme_value_index();
  if (!xi || !(*xi > 0.0)) return std::nullopt;
  return 1.0 / *xi;
}

bool DistributionModel::has_tail() const {
  return !std::holds_alternative<StableSkewed>(kind_);
}

DistributionModel parse_model(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::vector<double> p =
      ParseParams(colon == std::string::npos ? "" : spec.substr(colon + 1), spec);
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (p.size() < lo || p.size() > hi) {
      throw Error(Errc::kConfiguration, "model '" + kind + "' expects " + std::to_string(lo) +
                                            (lo == hi ? "" : "-" + std::to_string(hi)) +
                                            " parameter(s) in '" + spec + "'");
    }
  };
  try {
    if (kind == "gpd") {
      need(1, 2);
      return DistributionModel::gpd(p[0], p.size() > 1 ? p[1] : 1.0);
    }
    if (kind == "pareto") {
      need(1, 1);
      return DistributionModel::pareto(p[0]);
    }
    if (kind == "beta") {
      need(2, 2);
      return DistributionModel::beta(p[0], p[1]);
    }
    if (kind == "exp" || kind == "exponential") {
      need(0, 1);
      return DistributionModel::exponential(p.empty() ? 1.0 : p[0]);
    }
    if (kind == "lognormal") {
      need(0, 2);
      return DistributionModel::lognormal(p.size() > 0 ? p[0] : 0.0, p.size() > 1 ? p[1] : 1.0);
    }
    if (kind == "stable") {
      need(1, 1);
      return DistributionModel::stable(p[0]);
    }
    if (kind == "lambertw" || kind == "nonstd") {
      need(0, 0);
      return DistributionModel::lambert_w_tail();
    }
  } catch (const Error& e) {
    if (e.code() == Errc::kConfiguration) throw;
    throw Error(Errc::kConfiguration, "model '" + spec + "': " + e.what());
  }
  throw Error(Errc::kConfiguration, "unknown model kind '" + kind + "'");
}

double theoretical_me(const DistributionModel& model, double u) {
  if (!model.has_finite_mean()) {
    throw Error(Errc::kMeanUndefined, model.describe() + " has infinite mean (xi >= 1)");
  }
  if (const auto* g = std::get_if<Gpd>(&model.kind())) {
    const double xi = g->params.xi();
    const double beta = g->params.beta();
    if (!(u < g->params.upper_endpoint())) {
      throw Error(Errc::kDegenerateThreshold,
                  "threshold " + format_shortest(u) + " at or beyond the right endpoint");
    }
    if (u < 0.0) return beta / (1.0 - xi) - u;
    return beta / (1.0 - xi) + u * xi / (1.0 - xi);
  }
  if (const auto* e = std::get_if<Exponential>(&model.kind())) {
    return u < 0.0 ? e->mean - u : e->mean;
  }
  return theoretical_me_quadrature(model, u);
}

double theoretical_me_quadrature(const DistributionModel& model, double u) {
  if (!model.has_finite_mean()) {
    throw Error(Errc::kMeanUndefined, model.describe() + " has infinite mean (xi >= 1)");
  }
  if (!model.has_tail()) {
    throw Error(Errc::kUnsupported, "mean excess needs a tail function");
  }
  const double left = model.left_endpoint();
  const double right = model.right_endpoint();
  if (std::isnan(u) || !(u < right) || model.tail(u) == 0.0) {
    throw Error(Errc::kDegenerateThreshold,
                "threshold " + format_shortest(u) + " at or beyond the right endpoint");
  }
  const double a = std::max(u, left);
  const double below = u < left ? left - u : 0.0;
  return (below + TailIntegral(model, a, right)) / model.tail(u);
}

double excess_cdf(const DistributionModel& model, double u, double x) {
  if (std::isnan(x) || x < 0.0) {
    throw Error(Errc::kDomain, "excess must be nonnegative, got " + format_shortest(x));
  }
  const double tail_u = model.tail(u);
  if (tail_u == 0.0) {
    throw Error(Errc::kDegenerateThreshold,
                "threshold " + format_shortest(u) + " has zero tail probability");
  }
  return std::clamp(1.0 - model.tail(u + x) / tail_u, 0.0, 1.0);
}

double quantile_b(const DistributionModel& model, double t) {
  if (std::isnan(t) || t < 1.0) {
    throw Error(Errc::kDomain, "b(t) needs t >= 1, got " + format_shortest(t));
  }
  return std::visit(
      Overloaded{
          [t](const Pareto& d) { return std::pow(t, 1.0 / d.alpha); },
          [t](const Exponential& d) { return d.mean * std::log(t); },
          [t](const LambertWTail&) { return std::sqrt(t) * (1.0 + 10.0 * std::log(t)); },
          [t](const Gpd& d) {
            const double xi = d.params.xi();
            if (std::abs(xi) < kXiZero) return d.params.beta() * std::log(t);
            return d.params.beta() * std::expm1(xi * std::log(t)) / xi;
          },
          [&model, t](const auto&) { return model.inverse_tail(1.0 / t); },
      },
      model.kind());
}

double draw(const DistributionModel& model, CounterRng& rng) {
  if (const auto* s = std::get_if<StableSkewed>(&model.kind())) {
    return draw_positive_stable(s->alpha, rng);
  }
  return model.inverse_tail(rng.uniform());
}

std::vector<double> sample(const DistributionModel& model, std::size_t n, RandomSeed seed) {
  if (n == 0) throw Error(Errc::kDomain, "sample size must be at least 1");
  CounterRng rng(seed);
  std::vector<double> out(n);
  for (double& x : out) x = draw(model, rng);
  return out;
}

double truncated_mean(const DistributionModel& model, double t) {
  if (std::isnan(t)) throw Error(Errc::kDomain, "truncation point is NaN");
  if (t <= model.left_endpoint()) return 0.0;
  if (const auto* p = std::get_if<Pareto>(&model.kind())) {
    if (p->alpha == 1.0) return std::log(t);
    return p->alpha / (p->alpha - 1.0) * (1.0 - std::pow(t, 1.0 - p->alpha));
  }
  if (const auto* e = std::get_if<Exponential>(&model.kind())) {
    const double m = e->mean;
    if (std::isinf(t)) return m;
    return -m * std::expm1(-t / m) - t * std::exp(-t / m);
  }
  if (const auto* g = std::get_if<Gpd>(&model.kind())) {
    const double xi = g->params.xi();
    const double beta = g->params.beta();
    const double x = std::min(t, g->params.upper_endpoint());
    if (std::isinf(x)) {
      if (xi >= 1.0) return kInf;
      return beta / (1.0 - xi);
    }
    const double log_tail = GpdLogTail(x, g->params);
    double integral;  // of the tail over [0, x]
    if (std::abs(xi) < kXiZero) {
      integral = -beta * std::expm1(log_tail);
    } else if (xi == 1.0) {
      integral = beta * std::log1p(x / beta);
    } else {
      integral = -beta / (1.0 - xi) * std::expm1((1.0 - xi) * log_tail);
    }
    return integral - x * std::exp(log_tail);
  }
  return truncated_mean_quadrature(model, t);
}

double truncated_mean_quadrature(const DistributionModel& model, double t) {
  if (std::isnan(t)) throw Error(Errc::kDomain, "truncation point is NaN");
  const double left = model.left_endpoint();
  if (t <= left) return 0.0;
  if (const auto* q = std::get_if<QuantileDefined>(&model.kind());
      q != nullptr && std::isinf(left)) {
    // E[X 1{X <= t}] = integral of Q over (0, F(t)).
    const double top = 1.0 - model.tail(t);
    auto f = [q](double p) {
      return q->quantile(std::max(p, std::numeric_limits<double>::min()));
    };
    return numeric::integrate(f, 0.0, top);
  }
  if (!model.has_tail() || std::isinf(left)) {
    throw Error(Errc::kUnsupported, "truncated mean needs a tail function and finite left endpoint");
  }
  const double x = std::min(t, model.right_endpoint());
  if (std::isinf(x)) {
    if (!model.has_finite_mean()) return kInf;
    return left + TailIntegral(model, left, x);
  }
  return left - x * model.tail(x) + TailIntegral(model, left, x);
}

}  // namespace tailscope::dist
