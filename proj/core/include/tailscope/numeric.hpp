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
#include <functional>

namespace tailscope::numeric {

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 0.0;
  int max_depth = 48;
  int initial_panels = 16;
};

/// Adaptive Simpson quadrature of `f` over the finite interval [a, b].
/// The error target per panel is max(abs_tol, rel_tol * |coarse integral|).
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options = {});

/// Integral of `f` over [a, inf) through the substitution
/// x = a + scale * ((1 - s)^(-power) - 1) on s in [0, 1). power = 1 is the
/// plain x = a + s / (1 - s) map; larger powers flatten integrable algebraic
/// decay at the upper end. f must tend to zero at infinity.
double integrate_to_infinity(const std::function<double(double)>& f, double a,
                             double power = 1.0, double scale = 1.0,
                             const QuadratureOptions& options = {});

/// Principal branch of the Lambert W function for x >= 0: the solution of
/// w * exp(w) = x. Halley iteration started at log(1 + x), relative
/// tolerance 1e-12, at most 50 steps. Throws Errc::kDomain for x < 0.
double lambert_w(double x);

/// Bisection root of a function with a sign change on [lo, hi].
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double x_tol = 0.0, int max_iter = 400);

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 picks
/// hardware concurrency). Results must be written to index-addressed
/// storage; scheduling order is not deterministic but outcomes are.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace tailscope::numeric
