// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>

namespace quantsel {

// SplitMix64 finalizer, used as a bit mixer for seed derivation.
inline std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

// Derives an independent substream seed from a root seed and up to three
// stream indices. Monte-Carlo trials own disjoint substreams so that results
// do not depend on scheduling or worker count.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  std::uint64_t h = mix64(seed + kGamma);
  h = mix64(h ^ (a + kGamma));
  h = mix64(h ^ (b + kGamma));
  h = mix64(h ^ (c + kGamma));
  return h;
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

// Uniform double in [0, 1) built from the top 53 bits of the engine output,
// identical on every platform.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// One Box-Muller pair of independent standard normal draws. The library
// avoids std::normal_distribution because its output is
// implementation-defined; this keeps serialized ensembles portable.
struct NormalPair {
  double z0;
  double z1;
};

inline NormalPair normal_pair(std::mt19937_64& gen) {
  const double u1 = static_cast<double>((gen() >> 11) + 1) * 0x1.0p-53;
  const double u2 = uniform01(gen);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

inline double standard_normal(std::mt19937_64& gen) {
  return normal_pair(gen).z0;
}

// Circularly symmetric complex normal with unit variance (CN(0, 1)).
inline std::complex<double> standard_cn(std::mt19937_64& gen) {
  const NormalPair z = normal_pair(gen);
  constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
  return {z.z0 * kInvSqrt2, z.z1 * kInvSqrt2};
}

// Unbiased uniform integer in [0, bound) by rejection sampling. The library
// avoids std::uniform_int_distribution for the same portability reason as
// above.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
  const std::uint64_t limit = max - max % bound;
  std::uint64_t x = gen();
  while (x >= limit) x = gen();
  return x % bound;
}

}  // namespace quantsel
