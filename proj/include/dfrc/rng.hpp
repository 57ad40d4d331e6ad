#ifndef DFRC_RNG_HPP
#define DFRC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "dfrc/types.hpp"

namespace dfrc {

/// Seeded random stream. Gaussian draws use an explicit Box-Muller so that
/// sequences do not depend on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent substream for worker/block `index`.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    // splitmix-style scramble of (seed, index)
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return Rng(z ^ (z >> 31));
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 1e-300);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

  /// Circularly-symmetric complex Gaussian with unit variance (E|z|^2 = 1).
  Complex complex_gaussian() {
    const double re = gaussian();
    const double im = gaussian();
    return Complex(re, im) * M_SQRT1_2;
  }

  Complex unit_phase() {
    const double phi = 2.0 * M_PI * uniform();
    return Complex(std::cos(phi), std::sin(phi));
  }

  std::uint64_t integer() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dfrc

#endif  // DFRC_RNG_HPP
