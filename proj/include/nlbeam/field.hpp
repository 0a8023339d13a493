#pragma once

#include "nlbeam/grid.hpp"
#include "nlbeam/types.hpp"

namespace nlbeam {

// Real-space samples on a grid, flat row-major storage.
struct RealField {
  Grid grid;
  ArrayXr values;
};

// Fourier coefficients c_k of a real field, flat row-major storage in FFT
// frequency order.  Convention: f(x) = sum_k c_k exp(i xi_k . x), so the
// forward transform carries the 1/N^dim factor.  Hermitian symmetry
// c_{-k} = conj(c_k) is expected everywhere a real field is reconstructed.
struct SpectralField {
  Grid grid;
  ArrayXc coeffs;
};

RealField make_real_field(const Grid& grid, ArrayXr values);
RealField zero_real_field(const Grid& grid);
SpectralField make_spectral_field(const Grid& grid, ArrayXc coeffs);
SpectralField zero_spectral_field(const Grid& grid);

// max_k |c_{-k} - conj(c_k)| scaled by max_k |c_k| (0 for the zero field).
Real hermitian_asymmetry(const SpectralField& f);

// Zero every coefficient on an unpaired Nyquist row (-N/2 on any axis).
void zero_nyquist(SpectralField& f);

}  // namespace nlbeam
