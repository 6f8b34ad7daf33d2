// Copyright 2026 The augimpact Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>

namespace augimpact {

/// SplitMix64 step: advances `state` by 0x9E3779B97F4A7C15 and returns the
/// mixed output. Used for seeding and seed splitting.
std::uint64_t splitmix64(std::uint64_t& state);

/// Sub-seed for stream `index` of `seed`: the SplitMix64 output mixer applied
/// to seed + (index + 1) * 0x9E3779B97F4A7C15. Workers that split a batch
/// seed their own Rng with derive_seed(seed, first_image_index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// xoshiro256** generator with the draw conventions every augmentation relies
/// on. All derived draws are documented here so golden values can be
/// replayed on any platform:
///
///   next_u64()        s1*5 rotl 7, *9; then the xoshiro256 state update
///   uniform()         (next_u64() >> 11) * 2^-53, in [0, 1), one draw
///   uniform(a, b)     a + (b - a) * uniform(), one draw
///   uniform_int(l,h)  l + floor(uniform() * (h - l + 1)), clamped to h,
///                     one draw (bias below 2^-40 for the ranges used here)
///   bernoulli(p)      uniform() < p, one draw
///   normal()          Box-Muller cosine branch, exactly two draws
///   gamma(k)          Marsaglia-Tsang, variable draws
///   beta(a)           Beta(a, a); exactly one uniform() when a == 1,
///                     otherwise gamma(a) / (gamma(a) + gamma(a))
///
/// Seeding fills the four state words with successive SplitMix64 outputs
/// starting from the seed.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t next_u64();
  double uniform();
  double uniform(double lo, double hi);
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p);
  double normal();
  double gamma(double shape);
  double beta(double alpha);

  std::array<std::uint64_t, 4> state() const { return s_; }

  // UniformRandomBitGenerator, so the generator also works with <random>.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  std::array<std::uint64_t, 4> s_{};
};

}  // namespace augimpact
