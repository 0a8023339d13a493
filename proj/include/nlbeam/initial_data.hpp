#pragma once

#include <cstdint>
#include <string>

#include "nlbeam/solver.hpp"

namespace nlbeam {

// Initial-condition families.  LorentzPole and ExpDecaySpectrum carry a
// ground-truth analyticity radius `a` by construction: the first has poles
// at +-i a (1D only), the second is built directly as |c(xi)| ~ e^{-a |xi|}.
struct InitialDataSpec {
  enum class Family {
    Zero,
    GaussianBump,        // amplitude * exp(-|x|^2 / width^2)
    LorentzPole,         // amplitude / (1 + (x/a)^2), 1D
    ExpDecaySpectrum,    // c_k = amplitude * exp(-a |xi_k|)
    SingleMode,          // amplitude * cos(k * (2 pi / L) * x_1)
    RandomBandLimited,   // Gaussian coefficients, |k| <= band, H2 norm =
                         // amplitude
  };
  Family family = Family::Zero;
  Real amplitude = 1;
  Real width = 1;          // GaussianBump
  Real a = 0.5;            // LorentzPole / ExpDecaySpectrum
  int k = 1;               // SingleMode
  int band = 8;            // RandomBandLimited
  std::uint64_t seed = 1;  // RandomBandLimited
};

SpectralField build_field(const Grid& grid, const InitialDataSpec& spec);

State build_state(const Grid& grid, const BeamParams& params,
                  const InitialDataSpec& u0, const InitialDataSpec& u1);

// max |u| over the box-boundary sample planes divided by max |u| overall;
// 0 for the zero field.  The box stands in for the whole space, so this
// ratio staying below 1e-10 is the monitored truncation assumption.
Real boundary_amplitude_ratio(const RealField& f);

inline constexpr Real kBoundaryWarnRatio = 1e-10;

std::string family_name(InitialDataSpec::Family family);
InitialDataSpec::Family family_from_name(const std::string& name);

}  // namespace nlbeam
