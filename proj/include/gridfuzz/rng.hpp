#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gridfuzz {

/// splitmix64 mixing step; used to derive independent sub-seeds from a
/// master seed so results do not depend on evaluation order or thread count.
inline std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
  std::uint64_t s = mix_seed(master ^ mix_seed(stream));
  s = mix_seed(s ^ mix_seed(a));
  return mix_seed(s ^ mix_seed(b));
}

/// Deterministic RNG wrapper. mt19937_64 output is pinned by the standard,
/// and the uniform mappings below avoid the implementation-defined
/// std::*_distribution classes, so sequences are reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// uniform real in [0, 1)
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// uniform real in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// uniform integer in [0, n)
  std::uint64_t index(std::uint64_t n) {
    // modulo bias is < 2^-40 for the population/gene sizes used here
    return engine_() % n;
  }

  bool coin() { return (engine_() & 1ULL) != 0; }

  /// standard normal (Box-Muller, uses two uniforms per pair)
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace gridfuzz
