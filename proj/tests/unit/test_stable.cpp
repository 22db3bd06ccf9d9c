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


#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "tailscope/dist.hpp"
#include "tailscope/empirics.hpp"
#include "tailscope/estimators.hpp"

using namespace tailscope;
using namespace tailscope::dist;
using tailscope::testing::CodeOf;

namespace {

std::complex<double> EmpiricalCf(const std::vector<double>& xs, double t) {
  std::complex<double> sum = 0.0;
  for (double x : xs) sum += std::polar(1.0, t * x);
  return sum / static_cast<double>(xs.size());
}

constexpr double kEulerGamma = 0.57721566490153286;

}  // namespace

TEST_CASE("stable_cf basics") {
  for (const auto& law : {StableLaw::positive_stable(1.5), StableLaw::positive_stable(4.0),
                          StableLaw::skewed_unit_index()}) {
    CHECK(stable_cf(0.0, law) == std::complex<double>(1.0, 0.0));
    for (double t : {0.3, 1.0, 2.7}) {
      const auto plus = stable_cf(t, law);
      const auto minus = stable_cf(-t, law);
      CHECK(std::conj(plus).real() == doctest::Approx(minus.real()).epsilon(1e-15));
      CHECK(std::conj(plus).imag() == doctest::Approx(minus.imag()).epsilon(1e-15));
      CHECK(std::abs(plus) <= 1.0);
    }
  }
  CHECK(CodeOf([] { StableLaw::positive_stable(1.0); }) == Errc::kParameter);
  CHECK(CodeOf([] { StableLaw::positive_stable(0.5); }) == Errc::kParameter);
}

TEST_CASE("stable_cf modulus for xi = 2 re-derived from the printed exponent") {
  // index 1/2: Gamma(1/2) = sqrt(pi), cos(pi/4) = 1/sqrt(2)
  const double expected = std::exp(-std::sqrt(std::numbers::pi) / std::numbers::sqrt2);
  CHECK(std::abs(stable_cf(1.0, StableLaw::positive_stable(2.0))) ==
        doctest::Approx(expected).epsilon(1e-14));
  // unit index: |E e^{itS1}| = exp(-pi |t| / 2), argument t (c0 - log|t|)
  const auto s1 = stable_cf(2.0, StableLaw::skewed_unit_index());
  CHECK(std::abs(s1) == doctest::Approx(std::exp(-std::numbers::pi)).epsilon(1e-14));
  CHECK(std::arg(s1) ==
        doctest::Approx(std::remainder(2.0 * (1.0 - kEulerGamma) - 2.0 * std::log(2.0),
                                       2.0 * std::numbers::pi))
            .epsilon(1e-9));
}

TEST_CASE("the unit-index drift integral equals 1 - Euler gamma") {
  CHECK(skewed_unit_drift() == doctest::Approx(1.0 - kEulerGamma).epsilon(1e-10));
}

TEST_CASE("positive stable samples are positive and match the characteristic function") {
  const auto law = StableLaw::positive_stable(1.5);
  const auto xs = sample(law, 100000, RandomSeed{31, 0});
  CHECK(std::all_of(xs.begin(), xs.end(), [](double x) { return x > 0.0; }));
  CHECK(xs == sample(law, 100000, RandomSeed{31, 0}));
  for (double t : {0.5, 1.0, 2.0}) {
    CHECK(std::abs(EmpiricalCf(xs, t) - stable_cf(t, law)) < 0.02);
  }
}

TEST_CASE("unit-index samples match the S1 characteristic function") {
  const auto law = StableLaw::skewed_unit_index();
  const auto xs = sample(law, 100000, RandomSeed{32, 0});
  for (double t : {0.25, 1.0, 1.5}) {
    CHECK(std::abs(EmpiricalCf(xs, t) - stable_cf(t, law)) < 0.02);
  }
}

TEST_CASE("stable(1.5) simulation law has a unit-constant x^-1.5 tail") {
  const auto model = DistributionModel::stable(1.5);
  const auto xs = sample(model, 1000000, RandomSeed{33, 0});
  const double frac =
      static_cast<double>(std::count_if(xs.begin(), xs.end(), [](double x) { return x > 100.0; })) /
      xs.size();
  CHECK(frac == doctest::Approx(1e-3).epsilon(0.15));
  // Hill at m = 1000 recovers alpha
  const OrderedSample s(sample(model, 100000, RandomSeed{33, 1}));
  CHECK(std::abs(hill(s, 1000) - 1.5) <= 0.2);
}
