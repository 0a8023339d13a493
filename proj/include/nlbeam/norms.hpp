#pragma once

#include <utility>

#include "nlbeam/field.hpp"

namespace nlbeam {

// Weighted spectral L2 norms: ||f|| = sqrt( L^dim * sum_k W(sigma |xi_k|)^2
// <xi_k>^{2s} |c_k|^2 ) with <xi> = sqrt(1 + |xi|^2).  Weight Exp gives the
// classical analytic-class norm, Cosh the modified one, None plain H^s.
// The L^dim quadrature factor is fixed by the transform normalization; every
// downstream contract is a ratio or a scaling law, so it cancels there.
struct NormSpec {
  Real sigma = 0;
  Real s = 0;
  enum class Weight { None, Exp, Cosh } weight = Weight::None;
};

// Direct summation below the log-domain threshold; log-sum-exp above it.
inline constexpr Real kLogDomainThreshold = 300.0;

Real weighted_norm(const SpectralField& f, const NormSpec& spec);

// (ratio, slack) with ratio = cosh-weight norm / exp-weight norm at (sigma,
// s).  Pointwise 1/2 exp(r) <= cosh(r) <= exp(r) forces ratio in [1/2, 1];
// slack is the distance to the nearer endpoint.  Zero field is an error.
std::pair<Real, Real> norm_equivalence_margin(const SpectralField& f,
                                              Real sigma, Real s);

// RHS - LHS of  cosh(r) - 1 <= r^{2 alpha} cosh(r),  evaluated without
// cancellation as cosh(r) * (r^{2 alpha} - 1) + 1.  Nonnegative for r >= 0,
// alpha in (0, 1].
Real cosh_deficit_bound_margin(Real r, Real alpha);

namespace detail {
// Both evaluation routes, exposed so their overlap window can be compared.
Real weighted_norm_direct(const SpectralField& f, const NormSpec& spec);
Real weighted_norm_log(const SpectralField& f, const NormSpec& spec);
// log of the norm value (-inf for the zero field); never overflows.
Real log_weighted_norm(const SpectralField& f, const NormSpec& spec);
// log cosh r for r >= 0 without overflow: r - log 2 + log1p(exp(-2r)).
Real log_cosh(Real r);
}  // namespace detail

}  // namespace nlbeam
