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
#include <numbers>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "support.hpp"
#include "tailscope/dist.hpp"
#include "tailscope/empirics.hpp"
#include "tailscope/numeric.hpp"
#include "tailscope/randset.hpp"

using namespace tailscope;
using tailscope::testing::CodeOf;
using tailscope::testing::UlpDistance;

namespace {

std::vector<double> InsertionSortDesc(std::vector<double> v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0 && v[j - 1] < v[j]; --j) std::swap(v[j - 1], v[j]);
  }
  return v;
}

// Direct enumeration of the empirical ME, no prefix sums.
double MeOracle(const std::vector<double>& xs, double u) {
  double sum = 0.0;
  int count = 0;
  for (double x : xs) {
    if (x > u) {
      sum += x - u;
      ++count;
    }
  }
  return sum / count;
}

OrderedSample Draw(const dist::DistributionModel& m, std::size_t n, std::uint64_t seed,
                   std::uint64_t stream = 0) {
  return OrderedSample(dist::sample(m, n, RandomSeed{seed, stream}));
}

std::size_t CountReps(std::size_t reps, const std::function<bool(std::size_t)>& pred) {
  std::vector<char> ok(reps);
  numeric::parallel_for(reps, [&](std::size_t r) { ok[r] = pred(r); });
  return static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 1));
}

}  // namespace

TEST_CASE("order_statistics sorts descending") {
  CHECK(order_statistics({1, 3, 2}).values_desc() == std::vector<double>{3, 2, 1});
  CHECK(order_statistics({3, 2, 1}).values_desc() == std::vector<double>{3, 2, 1});

  std::vector<double> perm(100);
  std::iota(perm.begin(), perm.end(), 1.0);
  CounterRng rng(RandomSeed{3, 0});
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto s = order_statistics(perm);
  CHECK(s.values_desc() == InsertionSortDesc(perm));
  CHECK(s.at(1) == 100.0);
  CHECK(s.at(100) == 1.0);

  CHECK(CodeOf([] { order_statistics({1.0}); }) == Errc::kInsufficientData);
  CHECK(CodeOf([] { order_statistics({1.0, std::nan("")}); }) == Errc::kDomain);
}

TEST_CASE("empirical_me by enumeration") {
  const OrderedSample s({1, 2, 3, 4});
  CHECK(empirical_me(s, 2.0) == 1.5);
  CHECK(empirical_me(s, 0.0) == 2.5);
  CHECK(empirical_me(s, -3.0) == 5.5);
  CHECK(CodeOf([&] { empirical_me(s, 4.0); }) == Errc::kEmptyExceedance);

  const auto xs = dist::sample(dist::DistributionModel::pareto(2.0), 1000, RandomSeed{8, 0});
  const OrderedSample p(xs);
  for (double u : {1.0, 1.5, 3.0, 10.0}) {
    CHECK(empirical_me(p, u) == doctest::Approx(MeOracle(xs, u)).epsilon(1e-12));
  }
}

TEST_CASE("me_plot points and ranges") {
  const OrderedSample s({1, 2, 3, 4});
  CHECK(me_plot(s, 2, 4) == PointSet2D{{3, 1}, {2, 1.5}, {1, 2}});
  CHECK(me_plot(s, 2, 2) == PointSet2D{{3, 1}});
  CHECK(CodeOf([&] { me_plot(s, 1, 4); }) == Errc::kRange);
  CHECK(CodeOf([&] { me_plot(s, 3, 2); }) == Errc::kRange);
  CHECK(CodeOf([&] { me_plot(s, 2, 5); }) == Errc::kRange);
  CHECK(CodeOf([] { me_plot(OrderedSample({2, 2, 2}), 2, 3); }) == Errc::kEmptyExceedance);
  // ties keep coincident points
  CHECK(me_plot(OrderedSample({5, 3, 3, 1}), 2, 3).size() == 2);
}

TEST_CASE("property: me_plot x-coordinates are non-increasing in i") {
  const OrderedSample s = Draw(dist::DistributionModel::lognormal(0, 1), 5000, 9);
  const auto pts = me_plot(s, 2, 5000);
  for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i].x <= pts[i - 1].x);
}

TEST_CASE("property: empirical ME scale and translation equivariance") {
  const auto xs = dist::sample(dist::DistributionModel::exponential(1.0), 2000, RandomSeed{10, 0});
  std::vector<double> scaled;
  std::vector<double> shifted;
  for (double x : xs) {
    scaled.push_back(2.0 * x);
    shifted.push_back(x + 0.5);
  }
  const OrderedSample s(xs);
  const OrderedSample sc(scaled);
  const OrderedSample sh(shifted);
  for (double u : {0.0, 0.5, 1.0, 3.0}) {
    CHECK(UlpDistance(empirical_me(sc, 2.0 * u), 2.0 * empirical_me(s, u)) <= 4);
    // shifting rounds each x + c once, so allow a few ulps of the shifted magnitude
    CHECK(std::abs(empirical_me(sh, u + 0.5) - empirical_me(s, u)) <= 1e-12);
  }
}

TEST_CASE("property: uniform consistency of the empirical ME for Exponential(1)") {
  const auto model = dist::DistributionModel::exponential(1.0);
  std::vector<double> medians;
  for (std::size_t n : {10000u, 100000u, 1000000u}) {
    std::vector<double> sup(20);
    numeric::parallel_for(20, [&](std::size_t r) {
      const OrderedSample s = Draw(model, n, 11, r);
      double worst = 0.0;
      for (int j = 0; j <= 200; ++j) worst = std::max(worst, std::abs(empirical_me(s, j / 100.0) - 1.0));
      sup[r] = worst;
    });
    medians.push_back(median(sup));
  }
  CHECK(medians[0] > medians[1]);
  CHECK(medians[1] > medians[2]);
  CHECK(medians[2] < 0.05);
}

TEST_CASE("tail empirical measure") {
  const OrderedSample s({10, 8, 6, 4, 2, 1});
  CHECK(tail_measure(s, 4, 1.0) == doctest::Approx(3.0 / 4.0));
  CHECK(tail_measure(s, 4, 10.0 / 4.0) == 0.0);
  CHECK(tail_measure(s, 4, 100.0) == 0.0);
  const TailMeasureView view(s, 4);
  double previous = 1e9;
  for (double x = 0.0; x < 3.0; x += 0.05) {
    CHECK(view(x) <= previous);
    previous = view(x);
  }
  CHECK(CodeOf([] { tail_measure(OrderedSample({1, 0, -1}), 2, 1.0); }) == Errc::kNormalization);
  CHECK(CodeOf([&] { tail_measure(s, 1, 1.0); }) == Errc::kRange);

  const OrderedSample p = Draw(dist::DistributionModel::pareto(2.0), 100000, 12);
  CHECK(std::abs(tail_measure(p, 1000, 2.0) - 0.25) <= 0.05);
}

TEST_CASE("normalize_positive") {
  const OrderedSample s({9, 4, 2, 1});
  const auto pts = normalize_positive(s, 3);
  CHECK(pts.size() == 2);
  for (const auto& p : pts) CHECK(p.x >= 1.0);
  CHECK(normalize_positive(s, 2) == PointSet2D{{1.0, 5.0 / 4.0}});
  CHECK(CodeOf([] { normalize_positive(OrderedSample({1, 0, -1}), 2); }) == Errc::kNormalization);

  // invariance under rescaling of the data
  const auto xs = dist::sample(dist::DistributionModel::pareto(2.0), 3000, RandomSeed{13, 0});
  std::vector<double> twice;
  for (double x : xs) twice.push_back(2.0 * x);
  const auto a = normalize_positive(OrderedSample(xs), 200);
  const auto b = normalize_positive(OrderedSample(twice), 200);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(UlpDistance(a[i].x, b[i].x) <= 4);
    CHECK(UlpDistance(a[i].y, b[i].y) <= 4);
  }
}

TEST_CASE("normalize_positive approaches the line y = x for Pareto(2)") {
  const auto model = dist::DistributionModel::pareto(2.0);
  const Window w(1, 3, 0, 4);
  const auto line = discretize(PositiveLine{0.5}, w, 4000);
  const std::size_t n = 50000;
  const std::size_t k = KRule::power(0.7)(n);
  // The sparse right end of the window dominates the distance, so the
  // spread across replications is wide; the median is the stable summary.
  const auto hits = CountReps(50, [&](std::size_t r) {
    return hausdorff_window(normalize_positive(Draw(model, n, 14, r), k), line, w) < 0.5;
  });
  CHECK(hits >= 26);
}

TEST_CASE("normalize_heavy uses the supplied scales") {
  const auto model = dist::DistributionModel::pareto(0.5);
  const std::size_t n = 50000;
  const std::size_t k = 100;
  const OrderedSample s = Draw(model, n, 15);
  const double b_nk = dist::quantile_b(model, double(n) / k);
  const double b_n = dist::quantile_b(model, double(n));
  CHECK(b_nk == doctest::Approx(std::pow(double(n) / k, 2.0)).epsilon(1e-12));
  const auto pts = normalize_heavy(s, k, b_nk, b_n);
  REQUIRE(pts.size() == k - 1);
  CHECK(pts[0].x == doctest::Approx(s.at(2) / std::pow(double(n) / k, 2.0)).epsilon(1e-12));
  CHECK(normalize_heavy(s, 2, b_nk, b_n).size() == 1);
  CHECK(CodeOf([&] { normalize_heavy(s, k, 0.0, b_n); }) == Errc::kNormalization);
}

TEST_CASE("centering_cnk") {
  const auto p1 = dist::DistributionModel::pareto(1.0);
  CHECK(centering_cnk(p1, 1000, 1) == 0.0);
  for (std::size_t k : {2u, 10u, 100u}) {
    CHECK(centering_cnk(p1, 10000, k) ==
          doctest::Approx(10000.0 * std::log(double(k))).epsilon(1e-12));
  }
  // quadrature oracle on the truncated means
  const double q = 1e4 * (dist::truncated_mean_quadrature(p1, 1e4) -
                          dist::truncated_mean_quadrature(p1, 1e2));
  CHECK(centering_cnk(p1, 10000, 100) == doctest::Approx(q).epsilon(1e-6));
  CHECK(centering_cnk(p1, 10000, 100) == doctest::Approx(46051.70185988091).epsilon(1e-12));
}

TEST_CASE("normalize_xi1 for Pareto(1)") {
  const auto p1 = dist::DistributionModel::pareto(1.0);
  const std::size_t n = 100000;
  const std::size_t k = KRule::power(0.5)(n);
  const double b_n = dist::quantile_b(p1, double(n));
  const double b_nk = dist::quantile_b(p1, double(n) / k);
  CHECK(k * b_nk / b_n == doctest::Approx(1.0).epsilon(1e-12));

  const OrderedSample s = Draw(p1, n, 16);
  const double c = centering_cnk(p1, n, k);
  const auto centered = normalize_xi1(s, k, b_nk, b_n, c);
  const auto plain = normalize_xi1(s, k, b_nk, b_n, 0.0);
  REQUIRE(centered.size() == k - 1);
  for (std::size_t j = 0; j < centered.size(); ++j) {
    const double i = double(j + 2);
    CHECK(centered[j].x == plain[j].x);
    CHECK(plain[j].y - centered[j].y == doctest::Approx(k * c / (i * b_n)).epsilon(1e-12));
  }
  CHECK(normalize_xi1(s, 2, b_nk, b_n, c).size() == 1);
}

TEST_CASE("centered xi = 1 normalization stays bounded on a compact window") {
  // On t in [1, 3] the limit t(1, S1 - 1 - log t) is bounded; the full set is not
  // (its y grows like t log t), see the decisions ledger.
  const auto p1 = dist::DistributionModel::pareto(1.0);
  const std::size_t n = 100000;
  const std::size_t k = KRule::power(0.5)(n);
  const double b_n = dist::quantile_b(p1, double(n));
  const double b_nk = dist::quantile_b(p1, double(n) / k);
  const double c = centering_cnk(p1, n, k);
  std::vector<double> max_y(50);
  numeric::parallel_for(50, [&](std::size_t r) {
    double m = 0.0;
    for (const auto& p : normalize_xi1(Draw(p1, n, 17, r), k, b_nk, b_n, c)) {
      if (p.x <= 3.0) m = std::max(m, std::abs(p.y));
    }
    max_y[r] = m;
  });
  CHECK(median(max_y) < 20.0);
}

TEST_CASE("normalize_negative") {
  const OrderedSample s({1.0, 0.8, 0.5, 0.2});
  const auto pts = normalize_negative(s, 4);
  for (const auto& p : pts) {
    CHECK(p.x >= 0.0);
    CHECK(p.x <= 1.0);
  }
  const auto two = normalize_negative(s, 2);
  REQUIRE(two.size() == 1);
  CHECK(two[0].x == 0.0);
  CHECK(CodeOf([] { normalize_negative(OrderedSample({1, 1, 0}), 2); }) == Errc::kDegenerateRange);

  const auto model = dist::DistributionModel::beta(2.0, 2.0);
  const Window w(0, 1, -0.1, 0.5);
  const auto segment = discretize(NegativeSegment{-0.5}, w, 4000);
  const std::size_t n = 50000;
  const std::size_t k = KRule::power(0.7)(n);
  const auto hits = CountReps(50, [&](std::size_t r) {
    return hausdorff_window(normalize_negative(Draw(model, n, 18, r), k), segment, w) < 0.3;
  });
  CHECK(hits >= 45);
}

TEST_CASE("normalize_zero") {
  const auto model = dist::DistributionModel::exponential(1.0);
  const std::size_t n = 50000;
  const std::size_t k = KRule::power(0.7)(n);
  const auto pts = normalize_zero(Draw(model, n, 19), k);
  double mean_y = 0.0;
  for (const auto& p : pts) {
    CHECK(p.x >= 0.0);
    mean_y += p.y;
  }
  mean_y /= pts.size();
  // the normalizer X_(k/2) - X_(k) ~ ln 2 puts the limit at 1/ln 2, see the ledger
  CHECK(std::abs(mean_y - 1.0 / std::numbers::ln2) <= 0.1);
  CHECK(CodeOf([] { normalize_zero(OrderedSample({3, 1, 1, 1}), 4); }) == Errc::kDegenerateRange);

  const auto ln = normalize_zero(Draw(dist::DistributionModel::lognormal(0, 1), n, 19), k);
  CHECK(ln.size() == k - 1);
}

TEST_CASE("KRule parsing and evaluation") {
  CHECK(KRule::power(0.7)(10000) == 630);
  CHECK(KRule::power(0.5)(10000) == 100);
  CHECK(KRule::parse("sqrt")(100000) == 316);
  CHECK(KRule::parse("pow:0.7").describe() == "pow:0.7");
  CHECK(KRule::parse("fixed:50")(1000) == 50);
  CHECK(KRule::parse("40")(30) == 30);
  CHECK(KRule::power(0.1)(3) == 2);
  for (const char* bad : {"pow:1.5", "fixed:1", "fixed:2.5", "x:3", "abc"}) {
    CAPTURE(bad);
    CHECK(CodeOf([&] { KRule::parse(bad); }) == Errc::kConfiguration);
  }
  CHECK(default_trim_min(50000) == 250);
  CHECK(default_trim_min(100) == 2);
}
