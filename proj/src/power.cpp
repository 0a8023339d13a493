#include "nlbeam/power.hpp"

#include <cmath>
#include <string>

#include "nlbeam/transform.hpp"

namespace nlbeam {

namespace {

// Coarse per-axis storage index -> padded per-axis storage index, or -1 for
// the unpaired Nyquist row.
int pad_axis_index(int i, int n, int m) {
  const int k = i < n / 2 ? i : i - n;  // signed wavenumber
  if (k == -n / 2) return -1;
  return k >= 0 ? k : k + m;
}

// Evaluate the trig polynomial of `f` on the padded grid with M points per
// axis (same box).  M must be even and >= N.
RealField padded_samples(const SpectralField& f, int m_points) {
  const Grid& g = f.grid;
  const Grid gp = make_grid(g.dim(), m_points, g.box_length());
  ArrayXc embedded = ArrayXc::Zero(gp.size());
  const int n = g.points_per_axis();
  for (Index k = 0; k < f.coeffs.size(); ++k) {
    auto ix = g.unflatten(k);
    std::array<int, 3> jx{0, 0, 0};
    bool keep = true;
    for (int axis = 0; axis < g.dim() && keep; ++axis) {
      const int j = pad_axis_index(ix[axis], n, m_points);
      if (j < 0)
        keep = false;
      else
        jx[axis] = j;
    }
    if (keep) embedded[gp.flatten(jx)] = f.coeffs[k];
  }
  return inverse_transform(SpectralField{gp, std::move(embedded)});
}

int padded_points(int n, int factor_num) {
  // Smallest even M >= factor_num * n / 2 (factor_num = p + 1 or q + 1).
  int m = (factor_num * n + 1) / 2;
  if (m % 2 != 0) ++m;
  return m;
}

}  // namespace

SpectralField dealiased_power(const SpectralField& f, int p) {
  if (p < 1 || p % 2 == 0)
    throw ConfigError("power exponent must be odd and >= 1; got " +
                      std::to_string(p));
  if (p == 1) {
    SpectralField out = f;
    return out;
  }
  const Grid& g = f.grid;
  const int n = g.points_per_axis();
  const int m = padded_points(n, p + 1);
  RealField fine = padded_samples(f, m);
  fine.values = fine.values.pow(p);
  SpectralField cp = forward_transform(fine);

  ArrayXc out = ArrayXc::Zero(g.size());
  for (Index k = 0; k < out.size(); ++k) {
    auto ix = g.unflatten(k);
    std::array<int, 3> jx{0, 0, 0};
    bool keep = true;
    for (int axis = 0; axis < g.dim() && keep; ++axis) {
      const int j = pad_axis_index(ix[axis], n, m);
      if (j < 0)
        keep = false;
      else
        jx[axis] = j;
    }
    if (keep) out[k] = cp.coeffs[cp.grid.flatten(jx)];
  }
  return SpectralField{g, std::move(out)};
}

Real dealiased_mean_power(const SpectralField& f, int q) {
  if (q < 1) throw ConfigError("mean power exponent must be >= 1");
  if (q == 1) {
    // Mean of u is the zero coefficient (real up to symmetry).
    return f.coeffs[0].real();
  }
  const int m = padded_points(f.grid.points_per_axis(), q + 1);
  RealField fine = padded_samples(f, m);
  return fine.values.pow(q).mean();
}

SpectralField modulus_majorant(const SpectralField& f) {
  ArrayXc out(f.coeffs.size());
  for (Index k = 0; k < out.size(); ++k)
    out[k] = Complex(std::abs(f.coeffs[k]), 0);
  return SpectralField{f.grid, std::move(out)};
}

}  // namespace nlbeam
