#pragma once

#include "nlbeam/field.hpp"

namespace nlbeam {

// Fourier coefficients of u^p computed alias-free by zero-padding each axis
// to M = (p+1) N / 2, evaluating the power on the fine grid, and truncating
// back.  p must be odd and >= 1.  Unpaired Nyquist rows of the input are
// dropped (zeroed) before padding; output Nyquist rows are zero.
SpectralField dealiased_power(const SpectralField& f, int p);

// Mean of u^q over the box, (1/L^dim) * integral of u^q dx, computed exactly
// (alias-free) for any integer q >= 1 via the same padding rule.
Real dealiased_mean_power(const SpectralField& f, int q);

// Coefficient-wise modulus: c_k -> |c_k|.  Preserves every radial-weight norm
// exactly and keeps Hermitian symmetry.
SpectralField modulus_majorant(const SpectralField& f);

}  // namespace nlbeam
