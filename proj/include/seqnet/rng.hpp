// SPDX-License-Identifier: Apache-2.0
//
// Seeded random number generation with named split streams. Every consumer
// (weight init, task generator, trainer shuffling, ...) derives its own
// stream from the master seed, so adding a consumer never perturbs the
// others. Distributions are implemented here rather than taken from
// <random> because the standard leaves normal/uniform_real sequences
// implementation-defined and the experiment harness promises byte-identical
// output for a given seed.

#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace seqnet {

// SplitMix64; also used to hash stream names into the master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  // Derives the stream named `name` from `master`. Distinct names give
  // independent streams for the same master seed.
  static Rng stream(std::uint64_t master, std::string_view name) {
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a over the name
    for (unsigned char c : name) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    std::uint64_t sm = master;
    splitmix64(sm);
    return Rng(sm ^ h);
  }

  // xoshiro256**
  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  // Standard normal via Box-Muller (deterministic, no cached spare).
  double normal() {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  bool coin() { return (next_u64() >> 63) != 0; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace seqnet
