#include "nlbeam/sampler.hpp"

#include <cmath>

#include "nlbeam/norms.hpp"

namespace nlbeam {

SpectralField sample_band_limited(const Grid& grid, int band, Rng& rng) {
  if (band < 1) throw ConfigError("band must be >= 1");
  ArrayXc c = ArrayXc::Zero(grid.size());
  const Real k0 = grid.fundamental();
  const Real cutoff = band * k0 * (1 + 1e-12);
  for (Index k = 0; k < grid.size(); ++k) {
    if (grid.touches_nyquist(k)) continue;
    if (grid.abs_xi()[k] > cutoff) continue;
    const Index neg = grid.negate_index(k);
    if (neg < k) continue;  // pair already drawn at its canonical index
    if (neg == k) {
      c[k] = Complex(rng.gaussian(), 0);
    } else {
      const Complex z(rng.gaussian(), rng.gaussian());
      c[k] = z;
      c[neg] = std::conj(z);
    }
  }
  return SpectralField{grid, std::move(c)};
}

void normalize_h2(SpectralField& f, Real target) {
  const Real norm = weighted_norm(f, {0, 2, NormSpec::Weight::None});
  if (norm == 0) return;
  f.coeffs *= target / norm;
}

}  // namespace nlbeam
