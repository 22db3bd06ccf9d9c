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


#include <cmath>
#include <numbers>

#include "tailscope/dist.hpp"
#include "tailscope/error.hpp"
#include "tailscope/format.hpp"
#include "tailscope/numeric.hpp"

namespace tailscope::dist {
namespace {

using std::numbers::pi;

double DriftIntegrand(double x) {
  if (x < 1e-3) return 1.0 - 7.0 * x / 6.0 + x * x;
  return std::sin(x) / (x * x) - 1.0 / (x * (1.0 + x));
}

double ComputeDrift() {
  constexpr int kHalfPeriods = 256;
  numeric::QuadratureOptions opts;
  opts.rel_tol = 1e-13;
  double sum = 0.0;
  for (int j = 0; j < kHalfPeriods; ++j) {
    sum += numeric::integrate(DriftIntegrand, j * pi, (j + 1) * pi, opts);
  }
  // Beyond A = 256 pi (a multiple of 2 pi) integrate by parts:
  // int sin x / x^2 = 1/A^2 - 6/A^4 + 120/A^6 + O(A^-8).
  const double a = kHalfPeriods * pi;
  const double a2 = a * a;
  const double sine_part = 1.0 / a2 - 6.0 / (a2 * a2) + 120.0 / (a2 * a2 * a2);
  return sum + sine_part - std::log1p(1.0 / a);
}

}  // namespace

StableLaw StableLaw::positive_stable(double xi) {
  if (!(xi > 1.0) || !std::isfinite(xi)) {
    throw Error(Errc::kParameter,
                "positive stable limit needs xi > 1, got " + format_shortest(xi));
  }
  return StableLaw(Variant::kPositiveStable, 1.0 / xi);
}

StableLaw StableLaw::skewed_unit_index() { return StableLaw(Variant::kSkewedUnitIndex, 1.0); }

double skewed_unit_drift() {
  static const double drift = ComputeDrift();
  return drift;
}

std::complex<double> stable_cf(double t, const StableLaw& law) {
  if (t == 0.0) return 1.0;
  const double sign = t > 0.0 ? 1.0 : -1.0;
  const double abs_t = std::abs(t);
  if (law.variant() == StableLaw::Variant::kPositiveStable) {
    const double a = law.index();
    const double c = std::tgamma(1.0 - a) * std::cos(pi * a / 2.0);
    const std::complex<double> bracket(1.0, -sign * std::tan(pi * a / 2.0));
    return std::exp(-c * std::pow(abs_t, a) * bracket);
  }
  const std::complex<double> exponent(-abs_t * pi / 2.0,
                                      t * skewed_unit_drift() - t * std::log(abs_t));
  return std::exp(exponent);
}

double draw_positive_stable(double alpha, CounterRng& rng) {
  // Chambers-Mallows-Stuck, beta = 1, unit scale, then rescaled so the
  // characteristic exponent carries the Gamma(1 - alpha) cos(pi alpha / 2)
  // factor.
  const double v = pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double tan_term = std::tan(pi * alpha / 2.0);
  const double b = std::atan(tan_term) / alpha;
  const double s = std::pow(1.0 + tan_term * tan_term, 1.0 / (2.0 * alpha));
  const double z = s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
  const double gamma = std::pow(std::tgamma(1.0 - alpha) * std::cos(pi * alpha / 2.0), 1.0 / alpha);
  return gamma * z;
}

double draw(const StableLaw& law, CounterRng& rng) {
  if (law.variant() == StableLaw::Variant::kPositiveStable) {
    return draw_positive_stable(law.index(), rng);
  }
  const double v = pi * (rng.uniform() - 0.5);
  const double w = rng.exponential();
  const double half_pi = pi / 2.0;
  const double z = (2.0 / pi) * ((half_pi + v) * std::tan(v) -
                                 std::log(half_pi * w * std::cos(v) / (half_pi + v)));
  // Scale pi/2 in the 1-parameterization adds (2/pi) * (pi/2) * log(pi/2).
  return half_pi * z + std::log(half_pi) + skewed_unit_drift();
}

std::vector<double> sample(const StableLaw& law, std::size_t n, RandomSeed seed) {
  if (n == 0) throw Error(Errc::kDomain, "sample size must be at least 1");
  CounterRng rng(seed);
  std::vector<double> out(n);
  for (double& x : out) x = draw(law, rng);
  return out;
}

}  // namespace tailscope::dist
