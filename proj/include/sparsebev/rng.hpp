#pragma once

#include <cmath>
#include <cstdint>

namespace sparsebev {

// Deterministic 64-bit split-mix sequence. Every seeded draw in the project
// goes through this generator so that scenes, masks, and weights can be
// reproduced byte-for-byte by any implementation of the same recurrence:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Doubles take the top 53 bits; normals use the Box-Muller transform on two
// consecutive uniforms.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n). n must be positive; modulo bias is irrelevant
  // at the ranges used here (n << 2^64).
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

  double next_normal(double mean, double sigma) {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 < 1e-300) u1 = 1e-300;
    double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  uint64_t state_;
};

// Stream derivation: independent sub-sequences for (seed, stream) pairs, so
// per-frame or per-camera draws do not depend on evaluation order.
inline uint64_t derive_seed(uint64_t base, uint64_t stream) {
  SplitMix64 g(base ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  g.next_u64();
  return g.next_u64();
}

inline uint64_t derive_seed(uint64_t base, uint64_t s1, uint64_t s2) {
  return derive_seed(derive_seed(base, s1), s2);
}

}  // namespace sparsebev
