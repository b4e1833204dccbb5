#pragma once

#include <cstdint>
#include <random>

namespace pmfix {

/// Seed mixer; used to derive independent per-trial streams from (seed, index).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// mt19937_64 with distribution code pinned here rather than taken from the
/// standard library, whose distributions are implementation-defined. Streams
/// are therefore bit-identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t bits() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform on {0, …, n−1}; n ≥ 1.
  std::uint64_t index(std::uint64_t n) { return engine_() % n; }

  bool chance(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace pmfix
