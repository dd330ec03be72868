// src/jnfkd/rng.h

// Copyright 2026  The jnfkd Authors

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

#ifndef JNFKD_RNG_H_
#define JNFKD_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace jnfkd {

// Seedable random source with fully specified mappings, so that streams are
// reproducible bit-for-bit across platforms and standard-library versions.
// The mt19937_64 engine itself is pinned by the standard; the distribution
// mappings below are ours.
//
// Independent streams are derived from (seed, purpose, index), which makes
// results order-independent under any worker fan-out.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  static Rng derive(uint64_t seed, std::string_view purpose, uint64_t index = 0);

  uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), unbiased (rejection sampling). n must be > 0.
  uint64_t uniform_int(uint64_t n);

  /// Standard normal via Box-Muller; one spare value is cached.
  double gaussian();

  /// Fisher-Yates permutation of {0, ..., n-1}.
  std::vector<size_t> permutation(size_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer; used for seed mixing.
uint64_t mix64(uint64_t x);

}  // namespace jnfkd

#endif  // JNFKD_RNG_H_
