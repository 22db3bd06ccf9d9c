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

#include "tailscope/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "tailscope/error.hpp"

namespace tailscope::numeric {
namespace {

struct Panel {
  double a, b, fa, fm, fb, whole;
};

double Simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double Refine(const std::function<double(double)>& f, const Panel& p, double eps,
              int depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = Simpson(p.a, m, p.fa, flm, p.fm);
  const double right = Simpson(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps || !std::isfinite(delta)) {
    return left + right + delta / 15.0;
  }
  return Refine(f, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * eps, depth - 1) +
         Refine(f, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * eps, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options) {
  if (!(a < b)) return 0.0;
  const int panels = std::max(1, options.initial_panels);
  const double h = (b - a) / panels;

  std::vector<Panel> coarse;
  coarse.reserve(panels);
  double f_left = f(a);
  double scale = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == panels) ? b : lo + h;
    const double fm = f(0.5 * (lo + hi));
    const double fr = f(hi);
    const double whole = Simpson(lo, hi, f_left, fm, fr);
    coarse.push_back({lo, hi, f_left, fm, fr, whole});
    scale += std::abs(whole);
    f_left = fr;
  }
  const double eps = std::max(options.abs_tol, options.rel_tol * scale) / panels;

  double total = 0.0;
  for (const Panel& p : coarse) total += Refine(f, p, eps, options.max_depth);
  return total;
}

double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double power, double scale,
                             const QuadratureOptions& options) {
  if (!(power > 0.0) || !(scale > 0.0)) {
    throw Error(Errc::kDomain, "substitution power and scale must be positive");
  }
  auto g = [&](double s) -> double {
    if (s >= 1.0) return 0.0;
    const double one_minus = 1.0 - s;
    const double grow = std::pow(one_minus, -power);
    if (!std::isfinite(grow)) return 0.0;
    const double value = f(a + scale * (grow - 1.0));
    if (value == 0.0) return 0.0;
    return value * scale * power * grow / one_minus;
  };
  return integrate(g, 0.0, 1.0, options);
}

double lambert_w(double x) {
  if (std::isnan(x) || x < 0.0) {
    throw Error(Errc::kDomain, "lambert_w requires x >= 0 (principal branch)");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  constexpr double kTol = 1e-12;
  constexpr int kMaxIter = 50;
  double w = std::log1p(x);
  for (int i = 0; i < kMaxIter; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= kTol * std::abs(w)) break;
  }
  return w;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol, int max_iter) {
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    throw Error(Errc::kNumerical, "bisect: no sign change on the bracket");
  }
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || hi - lo <= x_tol) return mid;
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if ((f_mid < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  workers.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace tailscope::numeric
