#pragma once

#include <cstdint>
#include <random>

namespace cliffmem {

// Deterministic RNG with counter-based stream derivation. A stream derived
// from (master_seed, index) is identical on every platform and independent
// of which worker consumes it, which is what makes Monte Carlo results
// reproducible at any thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  static std::uint64_t mix64(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Stream for trial `index` under `master`. Streams for distinct indices
  // are decorrelated by the double mix.
  static Rng derive(std::uint64_t master, std::uint64_t index) {
    return Rng(mix64(master) ^ mix64(index * 0x9e3779b97f4a7c15ULL + 1));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits. Manual conversion so the
  // draw sequence does not depend on the standard library's distribution
  // implementation.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    if (bound <= 1) {
      return 0;
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v = next_u64();
    while (v >= limit) {
      v = next_u64();
    }
    return v % bound;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cliffmem
