#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace spgm {

// Seeded random stream used by all stochastic solver paths.
//
// mt19937_64 itself is bit-reproducible everywhere, but the standard leaves
// the *distributions* implementation-defined, so uniform index draws and
// normal variates are generated here by hand. Two runs with the same seed
// therefore produce identical iterates on any conforming toolchain.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Unbiased draw from {0, ..., n-1} via rejection.
  std::uint64_t uniform_index(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
    const std::uint64_t umax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t rem = (umax % n + 1) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t u = engine_();
      if (rem == 0 || u <= umax - rem) return u % n;
    }
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform_real() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; the second variate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform_real();  // (0, 1], keeps log finite
    const double u2 = uniform_real();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spgm
