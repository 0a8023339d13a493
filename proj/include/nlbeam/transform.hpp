#pragma once

#include "nlbeam/field.hpp"

namespace nlbeam {

// f(x_j) -> c_k with c_k = N^{-dim} sum_j f_j exp(-i xi_k . x_j), where the
// sample coordinates are centered: x_j = -L/2 + j h.  Exact inverse of
// inverse_transform up to rounding.
SpectralField forward_transform(const RealField& f);

// c_k -> f(x_j) = sum_k c_k exp(i xi_k . x_j).  Requires Hermitian symmetry
// (asymmetry <= 1e-10) so the reconstruction is real; throws otherwise.
RealField inverse_transform(const SpectralField& f);

inline constexpr Real kHermitianTolerance = 1e-10;

namespace detail {
// Unnormalized DFT along every axis of a flat row-major array with `n`
// points per axis.  inverse=true applies the 1/n-per-axis scaled inverse.
void fft_all_axes(ArrayXc& data, int dim, int n, bool inverse);
}  // namespace detail

}  // namespace nlbeam
