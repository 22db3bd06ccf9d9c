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

#include "tailscope/random.hpp"

#include <cmath>

namespace tailscope {
namespace {

// Stafford's variant 13 of the murmur3 64-bit finalizer.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

CounterRng::CounterRng(RandomSeed seed)
    : key_(Mix64(Mix64(seed.seed + kGolden) ^ (seed.stream * 0xd1342543de82ef95ULL + 1))) {}

CounterRng::result_type CounterRng::at(std::uint64_t index) const {
  // Two rounds keep adjacent counters and adjacent keys decorrelated.
  return Mix64(Mix64(key_ + index * kGolden) ^ key_);
}

double CounterRng::uniform() {
  // 53 random bits, shifted by half an ulp so the result is in (0, 1).
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double CounterRng::exponential() { return -std::log(uniform()); }

double CounterRng::normal() {
  for (;;) {
    const double u = 2.0 * uniform() - 1.0;
    const double v = 2.0 * uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

}  // namespace tailscope
