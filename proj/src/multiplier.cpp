#include "nlbeam/multiplier.hpp"

#include <cmath>
#include <string>

namespace nlbeam {

namespace {

void require_nonneg(Real v, const char* name) {
  if (!(v >= 0) || !std::isfinite(v))
    throw ConfigError(std::string(name) + " must be finite and >= 0");
}

Real omega(Real m, Real abs_xi) {
  const Real r2 = abs_xi * abs_xi;
  return std::sqrt(m + r2 * r2);
}

}  // namespace

MultiplierSpec MultiplierSpec::cosh_sigma(Real sigma) {
  require_nonneg(sigma, "sigma");
  MultiplierSpec s;
  s.kind = Kind::CoshSigma;
  s.sigma = sigma;
  return s;
}

MultiplierSpec MultiplierSpec::sech_sigma(Real sigma) {
  require_nonneg(sigma, "sigma");
  MultiplierSpec s;
  s.kind = Kind::SechSigma;
  s.sigma = sigma;
  return s;
}

MultiplierSpec MultiplierSpec::exp_sigma(Real sigma, int sign) {
  require_nonneg(sigma, "sigma");
  if (sign != 1 && sign != -1) throw ConfigError("exp sign must be +1 or -1");
  MultiplierSpec s;
  s.kind = Kind::ExpSigma;
  s.sigma = sigma;
  s.sign = sign;
  return s;
}

MultiplierSpec MultiplierSpec::abs_d(Real s_exp) {
  MultiplierSpec s;
  s.kind = Kind::AbsD;
  s.s = s_exp;
  return s;
}

MultiplierSpec MultiplierSpec::bracket(Real s_exp) {
  MultiplierSpec s;
  s.kind = Kind::JapaneseBracket;
  s.s = s_exp;
  return s;
}

MultiplierSpec MultiplierSpec::propagator_cos(Real m, Real t) {
  if (!(m > 0) || !std::isfinite(m))
    throw ConfigError("propagator mass must be positive");
  MultiplierSpec s;
  s.kind = Kind::PropagatorCos;
  s.m = m;
  s.t = t;
  return s;
}

MultiplierSpec MultiplierSpec::propagator_sinc(Real m, Real t) {
  MultiplierSpec s = propagator_cos(m, t);
  s.kind = Kind::PropagatorSinc;
  return s;
}

Real multiplier_symbol(const MultiplierSpec& spec, Real abs_xi) {
  using Kind = MultiplierSpec::Kind;
  switch (spec.kind) {
    case Kind::CoshSigma:
      return std::cosh(spec.sigma * abs_xi);
    case Kind::SechSigma:
      return 1.0 / std::cosh(spec.sigma * abs_xi);
    case Kind::ExpSigma:
      return std::exp(spec.sign * spec.sigma * abs_xi);
    case Kind::AbsD:
      return std::pow(abs_xi, spec.s);
    case Kind::JapaneseBracket:
      return std::pow(1.0 + abs_xi * abs_xi, spec.s / 2);
    case Kind::PropagatorCos:
      return std::cos(spec.t * omega(spec.m, abs_xi));
    case Kind::PropagatorSinc: {
      const Real w = omega(spec.m, abs_xi);
      return std::sin(spec.t * w) / w;
    }
  }
  return 0;  // unreachable
}

SpectralField apply_multiplier(const SpectralField& f,
                               const MultiplierSpec& spec) {
  using Kind = MultiplierSpec::Kind;
  const bool growing = spec.kind == Kind::CoshSigma ||
                       (spec.kind == Kind::ExpSigma && spec.sign > 0);
  if (growing) {
    const Real arg = spec.sigma * f.grid.max_abs_xi();
    if (arg > kMultiplierOverflowCap)
      throw Error("multiplier overflow: sigma * |xi_max| = " +
                  std::to_string(arg) + " exceeds " +
                  std::to_string(kMultiplierOverflowCap));
  }
  const ArrayXr& r = f.grid.abs_xi();
  ArrayXc out(f.coeffs.size());
  for (Index k = 0; k < out.size(); ++k)
    out[k] = f.coeffs[k] * multiplier_symbol(spec, r[k]);
  return SpectralField{f.grid, std::move(out)};
}

}  // namespace nlbeam
