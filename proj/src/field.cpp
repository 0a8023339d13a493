#include "nlbeam/field.hpp"

#include <algorithm>
#include <cmath>

namespace nlbeam {

RealField make_real_field(const Grid& grid, ArrayXr values) {
  if (values.size() != grid.size())
    throw ConfigError("real field size " + std::to_string(values.size()) +
                      " does not match grid size " +
                      std::to_string(grid.size()));
  if (!values.allFinite())
    throw Error("real field contains a non-finite value");
  return RealField{grid, std::move(values)};
}

RealField zero_real_field(const Grid& grid) {
  return RealField{grid, ArrayXr::Zero(grid.size())};
}

SpectralField make_spectral_field(const Grid& grid, ArrayXc coeffs) {
  if (coeffs.size() != grid.size())
    throw ConfigError("spectral field size " + std::to_string(coeffs.size()) +
                      " does not match grid size " +
                      std::to_string(grid.size()));
  if (!coeffs.allFinite())
    throw Error("spectral field contains a non-finite coefficient");
  return SpectralField{grid, std::move(coeffs)};
}

SpectralField zero_spectral_field(const Grid& grid) {
  return SpectralField{grid, ArrayXc::Zero(grid.size())};
}

Real hermitian_asymmetry(const SpectralField& f) {
  const Real scale = f.coeffs.abs().maxCoeff();
  if (scale == 0) return 0;
  Real worst = 0;
  for (Index k = 0; k < f.coeffs.size(); ++k) {
    const Index neg = f.grid.negate_index(k);
    worst = std::max(worst,
                     std::abs(f.coeffs[neg] - std::conj(f.coeffs[k])));
  }
  return worst / scale;
}

void zero_nyquist(SpectralField& f) {
  for (Index k = 0; k < f.coeffs.size(); ++k)
    if (f.grid.touches_nyquist(k)) f.coeffs[k] = Complex(0, 0);
}

}  // namespace nlbeam
