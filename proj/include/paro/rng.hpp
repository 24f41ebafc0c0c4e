#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace paro {

// Deterministic random source. std::mt19937_64 produces a bit-exact stream on
// every conforming implementation, but the standard <random> distributions are
// implementation-defined, so the uniform and normal transforms are spelled out
// here. Seeded generators must reproduce instances byte-for-byte.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, 1) from 53 random mantissa bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in {0, ..., n-1}, n > 0. Plain modulo; the bias is below
  // 2^-50 for the tiny ranges used here.
  int below(int n) { return static_cast<int>(engine_() % static_cast<std::uint64_t>(n)); }

  // Standard normal via Box-Muller, pairs cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double const u2 = uniform();
    double const radius = std::sqrt(-2.0 * std::log(u1));
    double const angle = 2.0 * 3.14159265358979323846 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace paro
