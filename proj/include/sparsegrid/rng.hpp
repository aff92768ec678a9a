#pragma once

#include <cstdint>
#include <random>

namespace sparsegrid {

using RngSeed = std::uint64_t;

// splitmix64 finalizer. Consecutive raw seeds give correlated first outputs
// from the Mersenne Twister, so user seeds are scrambled through this first.
constexpr std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// 64-bit Mersenne Twister seeded with mix_seed(seed). The engine's output
// sequence is fixed by the C++ standard; the mappings below avoid std
// distributions, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(RngSeed seed) : engine_(mix_seed(seed)) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), unbiased. n must be positive.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (true) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sparsegrid
