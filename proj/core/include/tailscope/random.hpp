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

#include <cstdint>
#include <limits>

namespace tailscope {

/// Identifies one reproducible random stream: `seed` picks the experiment,
/// `stream` the replication within it.
struct RandomSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Stream `offset` positions further along, same experiment seed.
  RandomSeed substream(std::uint64_t offset) const {
    return RandomSeed{seed, stream + offset};
  }

  friend bool operator==(const RandomSeed&, const RandomSeed&) = default;
};

/// Counter-based generator: draw i is a keyed bijective mix of i, so output
/// depends only on (seed, stream, draw index). Satisfies
/// UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(RandomSeed seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return at(counter_++); }

  /// Draw number `index` without advancing the generator.
  result_type at(std::uint64_t index) const;

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform();
  /// Uniform on (lo, hi).
  double uniform(double lo, double hi);
  /// Standard exponential.
  double exponential();
  /// Standard normal (polar Box-Muller, second variate discarded so the
  /// draw count per call is data dependent but deterministic).
  double normal();

  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace tailscope
