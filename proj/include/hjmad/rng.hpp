#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "hjmad/types.hpp"

namespace hjmad {

/// Seeded random stream with an explicitly specified Gaussian transform, so
/// that sample sequences are identical across standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// Uniform double in [0, 1).
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in (0, 1].
  double uniform_pos() {
    return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; the second value of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  Vec uniform_in(const Box& box) {
    Vec x(box.dim());
    for (int i = 0; i < box.dim(); ++i) x[i] = uniform(box.lower[i], box.upper[i]);
    return x;
  }

  std::uint64_t next_raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace hjmad
