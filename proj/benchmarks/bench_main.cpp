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


#include <benchmark/benchmark.h>

#include <vector>

#include "tailscope/dist.hpp"
#include "tailscope/empirics.hpp"
#include "tailscope/estimators.hpp"
#include "tailscope/numeric.hpp"
#include "tailscope/randset.hpp"

namespace {

using namespace tailscope;

void BM_SamplePareto(benchmark::State& state) {
  const auto model = dist::parse_model("pareto:2");
  for (auto _ : state) {
    benchmark::DoNotOptimize(dist::sample(model, state.range(0), {1, 0}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SamplePareto)->Arg(10000)->Arg(100000);

void BM_SampleStable(benchmark::State& state) {
  const auto model = dist::parse_model("stable:1.5");
  for (auto _ : state) {
    benchmark::DoNotOptimize(dist::sample(model, state.range(0), {1, 0}));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleStable)->Arg(100000);

void BM_MePlot(benchmark::State& state) {
  const std::size_t n = static_cast<std::size_t>(state.range(0));
  const OrderedSample s(dist::sample(dist::parse_model("pareto:2"), n, {2, 0}));
  for (auto _ : state) benchmark::DoNotOptimize(me_plot(s, 2, n));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MePlot)->Arg(50000)->Arg(1000000);

void BM_HillTrace(benchmark::State& state) {
  const OrderedSample s(dist::sample(dist::parse_model("pareto:2"), state.range(0), {3, 0}));
  for (auto _ : state) benchmark::DoNotOptimize(trace(s, EstimatorKind::kHill, {}));
}
BENCHMARK(BM_HillTrace)->Arg(50000);

void BM_HausdorffWindow(benchmark::State& state) {
  const std::size_t n = 100000;
  const std::size_t k = 3162;
  const OrderedSample s(dist::sample(dist::parse_model("pareto:2"), n, {4, 0}));
  const Window w(1, 3, 0, 4);
  const PointSet2D data = normalize_positive(s, k);
  const PointSet2D limit = discretize(PositiveLine{0.5}, w, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(hausdorff_window(data, limit, w));
}
BENCHMARK(BM_HausdorffWindow)->Arg(400)->Arg(4000);

void BM_LambertW(benchmark::State& state) {
  std::vector<double> xs;
  for (double x = 0.01; x < 1e12; x *= 1.37) xs.push_back(x);
  for (auto _ : state) {
    for (double x : xs) benchmark::DoNotOptimize(numeric::lambert_w(x));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(xs.size()));
}
BENCHMARK(BM_LambertW);

}  // namespace

BENCHMARK_MAIN();
