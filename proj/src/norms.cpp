#include "nlbeam/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace nlbeam {

namespace {

bool needs_log_domain(const SpectralField& f, const NormSpec& spec) {
  if (spec.weight == NormSpec::Weight::None || spec.sigma == 0) return false;
  return spec.sigma * f.grid.max_abs_xi() > kLogDomainThreshold;
}

void validate(const NormSpec& spec) {
  if (!(spec.sigma >= 0) || !std::isfinite(spec.sigma))
    throw ConfigError("norm sigma must be finite and >= 0");
  if (!std::isfinite(spec.s)) throw ConfigError("norm s must be finite");
}

}  // namespace

namespace detail {

Real log_cosh(Real r) {
  constexpr Real log2 = 0.69314718055994530941723212145818;
  return r - log2 + std::log1p(std::exp(-2 * r));
}

Real weighted_norm_direct(const SpectralField& f, const NormSpec& spec) {
  const ArrayXr& r = f.grid.abs_xi();
  const ArrayXr& r2 = f.grid.abs_xi_sq();
  Real sum = 0;
  for (Index k = 0; k < f.coeffs.size(); ++k) {
    const Real a = std::abs(f.coeffs[k]);
    if (a == 0) continue;
    Real w = 1;
    if (spec.sigma != 0) {
      switch (spec.weight) {
        case NormSpec::Weight::None:
          break;
        case NormSpec::Weight::Exp:
          w = std::exp(spec.sigma * r[k]);
          break;
        case NormSpec::Weight::Cosh:
          w = std::cosh(spec.sigma * r[k]);
          break;
      }
    }
    const Real bracket = std::pow(1.0 + r2[k], spec.s / 2);
    const Real term = a * w * bracket;
    sum += term * term;
  }
  const Real box = std::pow(f.grid.box_length(), f.grid.dim());
  return std::sqrt(box * sum);
}

Real log_weighted_norm(const SpectralField& f, const NormSpec& spec) {
  const ArrayXr& r = f.grid.abs_xi();
  const ArrayXr& r2 = f.grid.abs_xi_sq();
  std::vector<Real> logs;
  logs.reserve(f.coeffs.size());
  for (Index k = 0; k < f.coeffs.size(); ++k) {
    const Real a = std::abs(f.coeffs[k]);
    if (a == 0) continue;
    Real logw = 0;
    if (spec.sigma != 0) {
      switch (spec.weight) {
        case NormSpec::Weight::None:
          break;
        case NormSpec::Weight::Exp:
          logw = spec.sigma * r[k];
          break;
        case NormSpec::Weight::Cosh:
          logw = log_cosh(spec.sigma * r[k]);
          break;
      }
    }
    logs.push_back(2 * (logw + (spec.s / 2) * std::log1p(r2[k]) +
                        std::log(a)));
  }
  if (logs.empty()) return -std::numeric_limits<Real>::infinity();
  const Real top = *std::max_element(logs.begin(), logs.end());
  Real acc = 0;
  for (Real l : logs) acc += std::exp(l - top);
  const Real log_box = f.grid.dim() * std::log(f.grid.box_length());
  return 0.5 * (log_box + top + std::log(acc));
}

Real weighted_norm_log(const SpectralField& f, const NormSpec& spec) {
  return std::exp(log_weighted_norm(f, spec));
}

}  // namespace detail

Real weighted_norm(const SpectralField& f, const NormSpec& spec) {
  validate(spec);
  if (needs_log_domain(f, spec)) return detail::weighted_norm_log(f, spec);
  return detail::weighted_norm_direct(f, spec);
}

std::pair<Real, Real> norm_equivalence_margin(const SpectralField& f,
                                              Real sigma, Real s) {
  if ((f.coeffs.abs() == 0).all())
    throw Error("norm equivalence ratio is undefined for the zero field");
  NormSpec cosh_spec{sigma, s, NormSpec::Weight::Cosh};
  NormSpec exp_spec{sigma, s, NormSpec::Weight::Exp};
  validate(cosh_spec);
  Real ratio;
  if (needs_log_domain(f, cosh_spec)) {
    ratio = std::exp(detail::log_weighted_norm(f, cosh_spec) -
                     detail::log_weighted_norm(f, exp_spec));
  } else {
    ratio = detail::weighted_norm_direct(f, cosh_spec) /
            detail::weighted_norm_direct(f, exp_spec);
  }
  const Real slack = std::min(1.0 - ratio, ratio - 0.5);
  return {ratio, slack};
}

Real cosh_deficit_bound_margin(Real r, Real alpha) {
  if (!(r >= 0)) throw ConfigError("deficit margin requires r >= 0");
  if (!(alpha >= 0) || !(alpha <= 1))
    throw ConfigError("deficit margin requires alpha in [0, 1]");
  return std::cosh(r) * (std::pow(r, 2 * alpha) - 1.0) + 1.0;
}

}  // namespace nlbeam
