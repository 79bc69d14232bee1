#pragma once

#include <cmath>
#include <cstdint>

namespace rcp {

// Deterministic 64-bit PRNG (splitmix64). Every random quantity in the
// project is drawn from this sequence so scenarios and runs reproduce
// byte-identically across platforms and standard-library versions.
//
// The exact recurrence, for reference:
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   output = z ^ (z >> 31)
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_uniform();
  }

  // Standard normal via Box-Muller. Consumes exactly two uniforms per call;
  // no caching, so the draw sequence is position-independent.
  double next_gaussian() {
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log1p(-u1));
    return r * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  // Rayleigh(sigma) via inverse CDF: k = sigma * sqrt(-2 ln(1 - U)).
  double next_rayleigh(double sigma) {
    return sigma * std::sqrt(-2.0 * std::log1p(-next_uniform()));
  }

 private:
  std::uint64_t state_;
};

}  // namespace rcp
