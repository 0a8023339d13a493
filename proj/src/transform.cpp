#include "nlbeam/transform.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <string>

namespace nlbeam {
namespace detail {

namespace {

Eigen::FFT<Real>& fft_engine() {
  thread_local Eigen::FFT<Real> fft;  // caches plans per length
  return fft;
}

// Parity of the sum of per-axis storage indices; exp(-i xi_k . (-L/2)) folds
// into the per-mode sign (-1)^{k1+...+kd} because N is even.
Real center_sign(const Grid& g, Index flat) {
  auto ix = g.unflatten(flat);
  int sum = 0;
  for (int axis = 0; axis < g.dim(); ++axis) sum += ix[axis];
  return (sum & 1) ? Real(-1) : Real(1);
}

}  // namespace

void fft_all_axes(ArrayXc& data, int dim, int n, bool inverse) {
  auto& fft = fft_engine();
  Eigen::VectorXcd line(n), out(n);
  Index size = 1;
  for (int axis = 0; axis < dim; ++axis) size *= n;

  for (int axis = 0; axis < dim; ++axis) {
    // Row-major: stride of `axis` is n^(dim-1-axis).
    Index stride = 1;
    for (int a = axis + 1; a < dim; ++a) stride *= n;
    const Index block = stride * n;  // span of one transform line set
    for (Index base = 0; base < size; base += block) {
      for (Index off = 0; off < stride; ++off) {
        for (int j = 0; j < n; ++j) line[j] = data[base + off + j * stride];
        if (inverse)
          fft.inv(out, line);
        else
          fft.fwd(out, line);
        for (int j = 0; j < n; ++j) data[base + off + j * stride] = out[j];
      }
    }
  }
}

}  // namespace detail

SpectralField forward_transform(const RealField& f) {
  const Grid& g = f.grid;
  ArrayXc data = f.values.cast<Complex>();
  detail::fft_all_axes(data, g.dim(), g.points_per_axis(), false);
  const Real scale = 1.0 / static_cast<Real>(g.size());
  for (Index k = 0; k < data.size(); ++k)
    data[k] *= detail::center_sign(g, k) * scale;
  return SpectralField{g, std::move(data)};
}

RealField inverse_transform(const SpectralField& f) {
  const Real asym = hermitian_asymmetry(f);
  if (asym > kHermitianTolerance)
    throw Error("inverse transform requires Hermitian coefficients; "
                "asymmetry = " + std::to_string(asym));
  const Grid& g = f.grid;
  ArrayXc data = f.coeffs;
  const Real scale = static_cast<Real>(g.size());
  for (Index k = 0; k < data.size(); ++k)
    data[k] *= detail::center_sign(g, k) * scale;
  detail::fft_all_axes(data, g.dim(), g.points_per_axis(), true);
  return RealField{g, data.real()};
}

}  // namespace nlbeam
