#pragma once

#include "nlbeam/field.hpp"

namespace nlbeam {

// Radial Fourier multipliers m(|xi|) used throughout: analyticity weights,
// bracket powers, and the exact linear propagator symbols.
struct MultiplierSpec {
  enum class Kind {
    CoshSigma,        // cosh(sigma |xi|)
    SechSigma,        // 1 / cosh(sigma |xi|), exact pointwise reciprocal
    ExpSigma,         // exp(sign * sigma |xi|)
    AbsD,             // |xi|^s
    JapaneseBracket,  // (1 + |xi|^2)^(s/2)
    PropagatorCos,    // cos(t sqrt(m + |xi|^4))
    PropagatorSinc,   // sin(t w)/w,  w = sqrt(m + |xi|^4)
  };

  Kind kind = Kind::JapaneseBracket;
  Real sigma = 0;  // CoshSigma / SechSigma / ExpSigma
  Real s = 0;      // AbsD / JapaneseBracket exponent
  Real m = 0;      // PropagatorCos / PropagatorSinc mass
  Real t = 0;      // PropagatorCos / PropagatorSinc time step
  int sign = 1;    // ExpSigma: +1 or -1

  static MultiplierSpec cosh_sigma(Real sigma);
  static MultiplierSpec sech_sigma(Real sigma);
  static MultiplierSpec exp_sigma(Real sigma, int sign);
  static MultiplierSpec abs_d(Real s);
  static MultiplierSpec bracket(Real s);
  static MultiplierSpec propagator_cos(Real m, Real t);
  static MultiplierSpec propagator_sinc(Real m, Real t);
};

// Growing exponentials are evaluated directly and refuse arguments that would
// overflow double range.
inline constexpr Real kMultiplierOverflowCap = 700.0;

// Symbol value at a single |xi| >= 0.
Real multiplier_symbol(const MultiplierSpec& spec, Real abs_xi);

// Pointwise multiply coefficients by the symbol.  Throws if a growing symbol
// (CoshSigma, ExpSigma with sign +1) would overflow at the grid's largest
// frequency, reporting sigma * |xi_max|.
SpectralField apply_multiplier(const SpectralField& f,
                               const MultiplierSpec& spec);

}  // namespace nlbeam
