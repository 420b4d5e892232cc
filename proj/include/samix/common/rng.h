// samix/common/rng.h

// Copyright 2026  The samix authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SAMIX_COMMON_RNG_H_
#define SAMIX_COMMON_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace samix {

using Rng = std::mt19937_64;

// splitmix64 finalizer; used to derive independent streams from a root seed.
inline std::uint64_t MixBits(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t DeriveSeed(std::uint64_t root,
                                std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = MixBits(root);
  for (std::uint64_t p : path) h = MixBits(h ^ MixBits(p + 0x632BE59BD9B4E019ull));
  return h;
}

inline Rng MakeRng(std::uint64_t root, std::initializer_list<std::uint64_t> path = {}) {
  return Rng(DeriveSeed(root, path));
}

// Uniform draw in [lo, hi]; degenerate ranges return lo without consuming state.
inline double Uniform(Rng &rng, double lo, double hi) {
  if (!(hi > lo)) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t UniformIndex(Rng &rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool Bernoulli(Rng &rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace samix

#endif  // SAMIX_COMMON_RNG_H_
