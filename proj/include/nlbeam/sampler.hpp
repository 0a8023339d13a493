#pragma once

#include <cstdint>
#include <random>

#include "nlbeam/field.hpp"

namespace nlbeam {

// Deterministic draws: a fixed engine plus hand-rolled transforms, so a
// (config, seed) pair reproduces byte-identical streams on one platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [lo, hi).
  Real uniform(Real lo, Real hi) {
    const Real u = static_cast<Real>(engine_()) * 0x1.0p-64;
    return lo + (hi - lo) * u;
  }

  // Standard normal via Box-Muller (cached spare).
  Real gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    Real u1 = uniform(0, 1), u2 = uniform(0, 1);
    while (u1 <= 0) u1 = uniform(0, 1);
    const Real rad = std::sqrt(-2 * std::log(u1));
    constexpr Real two_pi = 6.283185307179586476925286766559;
    spare_ = rad * std::sin(two_pi * u2);
    has_spare_ = true;
    return rad * std::cos(two_pi * u2);
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  Real spare_ = 0;
  bool has_spare_ = false;
};

// Hermitian Gaussian field supported on integer lattice radius <= band,
// Nyquist rows zero, mean mode real.  Draw order is ascending flat index of
// the canonical (lower-index) half, two draws per retained pair.
SpectralField sample_band_limited(const Grid& grid, int band, Rng& rng);

// Scale a field so its Sobolev s=2 norm equals `target` (no-op for zero).
void normalize_h2(SpectralField& f, Real target);

}  // namespace nlbeam
