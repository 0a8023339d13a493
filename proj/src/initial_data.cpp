#include "nlbeam/initial_data.hpp"

#include <cmath>
#include <functional>

#include "nlbeam/sampler.hpp"
#include "nlbeam/transform.hpp"

namespace nlbeam {

namespace {

RealField sample_profile(const Grid& grid,
                         const std::function<Real(Real, Real, Real)>& f) {
  ArrayXr values(grid.size());
  for (Index j = 0; j < grid.size(); ++j) {
    auto ix = grid.unflatten(j);
    Real x[3] = {0, 0, 0};
    for (int axis = 0; axis < grid.dim(); ++axis)
      x[axis] = grid.axis_coordinate(ix[axis]);
    values[j] = f(x[0], x[1], x[2]);
  }
  return RealField{grid, std::move(values)};
}

}  // namespace

SpectralField build_field(const Grid& grid, const InitialDataSpec& spec) {
  using Family = InitialDataSpec::Family;
  if (!std::isfinite(spec.amplitude))
    throw ConfigError("data amplitude must be finite");
  switch (spec.family) {
    case Family::Zero:
      return zero_spectral_field(grid);
    case Family::GaussianBump: {
      if (!(spec.width > 0)) throw ConfigError("gaussian width must be > 0");
      const Real a = spec.amplitude, w2 = spec.width * spec.width;
      return forward_transform(sample_profile(
          grid, [a, w2](Real x, Real y, Real z) {
            return a * std::exp(-(x * x + y * y + z * z) / w2);
          }));
    }
    case Family::LorentzPole: {
      if (grid.dim() != 1)
        throw ConfigError("lorentz_pole data is one-dimensional");
      if (!(spec.a > 0)) throw ConfigError("pole distance a must be > 0");
      const Real a = spec.amplitude, d2 = spec.a * spec.a;
      return forward_transform(sample_profile(
          grid, [a, d2](Real x, Real, Real) {
            return a / (1 + x * x / d2);
          }));
    }
    case Family::ExpDecaySpectrum: {
      if (!(spec.a > 0)) throw ConfigError("decay rate a must be > 0");
      ArrayXc c(grid.size());
      for (Index k = 0; k < grid.size(); ++k)
        c[k] = Complex(spec.amplitude * std::exp(-spec.a * grid.abs_xi()[k]),
                       0);
      SpectralField f{grid, std::move(c)};
      zero_nyquist(f);
      return f;
    }
    case Family::SingleMode: {
      if (spec.k < 0 || spec.k >= grid.points_per_axis() / 2)
        throw ConfigError("single mode index must lie in [0, N/2)");
      ArrayXc c = ArrayXc::Zero(grid.size());
      std::array<int, 3> ix{0, 0, 0};
      ix[0] = spec.k;
      const Index pos = grid.flatten(ix);
      if (spec.k == 0) {
        c[pos] = Complex(spec.amplitude, 0);
      } else {
        c[pos] = Complex(spec.amplitude / 2, 0);
        c[grid.negate_index(pos)] = Complex(spec.amplitude / 2, 0);
      }
      return SpectralField{grid, std::move(c)};
    }
    case Family::RandomBandLimited: {
      Rng rng(spec.seed);
      SpectralField f = sample_band_limited(grid, spec.band, rng);
      normalize_h2(f, spec.amplitude);
      return f;
    }
  }
  throw ConfigError("unknown data family");
}

State build_state(const Grid& grid, const BeamParams& params,
                  const InitialDataSpec& u0, const InitialDataSpec& u1) {
  return make_state(build_field(grid, u0), build_field(grid, u1), 0, params);
}

Real boundary_amplitude_ratio(const RealField& f) {
  const Real overall = f.values.abs().maxCoeff();
  if (overall == 0) return 0;
  Real boundary = 0;
  for (Index j = 0; j < f.grid.size(); ++j) {
    auto ix = f.grid.unflatten(j);
    bool on_boundary = false;
    for (int axis = 0; axis < f.grid.dim(); ++axis)
      if (ix[axis] == 0) on_boundary = true;  // x = -L/2 plane
    if (on_boundary)
      boundary = std::max(boundary, std::abs(f.values[j]));
  }
  return boundary / overall;
}

std::string family_name(InitialDataSpec::Family family) {
  using Family = InitialDataSpec::Family;
  switch (family) {
    case Family::Zero: return "zero";
    case Family::GaussianBump: return "gaussian_bump";
    case Family::LorentzPole: return "lorentz_pole";
    case Family::ExpDecaySpectrum: return "exp_decay_spectrum";
    case Family::SingleMode: return "single_mode";
    case Family::RandomBandLimited: return "random_band_limited";
  }
  return "zero";
}

InitialDataSpec::Family family_from_name(const std::string& name) {
  using Family = InitialDataSpec::Family;
  if (name == "zero") return Family::Zero;
  if (name == "gaussian_bump") return Family::GaussianBump;
  if (name == "lorentz_pole") return Family::LorentzPole;
  if (name == "exp_decay_spectrum") return Family::ExpDecaySpectrum;
  if (name == "single_mode") return Family::SingleMode;
  if (name == "random_band_limited") return Family::RandomBandLimited;
  throw ConfigError("unknown data family '" + name + "'");
}

}  // namespace nlbeam
