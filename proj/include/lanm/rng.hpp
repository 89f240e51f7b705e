#pragma once

#include <complex>
#include <cmath>
#include <cstdint>

namespace lanm {

// Seed derivation for independent per-trial streams.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (0x9e3779b97f4a7c15ull + splitmix64(b)));
}

// Deterministic generator with explicit distribution code so that streams are
// bit-identical across standard libraries and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ = splitmix64_state(state_);
    return mix_output(state_);
  }

  // Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n) {
    // Rejection-free 128-bit multiply trick would add a dependency; the modulo
    // bias at desk-scale n is far below everything we measure.
    return next_u64() % n;
  }

  // Standard real normal, Box-Muller with a cached spare.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // Circular complex normal with unit variance per complex sample.
  std::complex<double> cnormal() {
    const double s = 0.70710678118654752440;  // 1/sqrt(2)
    return {normal() * s, normal() * s};
  }

 private:
  static std::uint64_t splitmix64_state(std::uint64_t x) { return x + 0x9e3779b97f4a7c15ull; }
  static std::uint64_t mix_output(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace lanm
