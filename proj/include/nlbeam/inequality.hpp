#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nlbeam/field.hpp"

namespace nlbeam {

// Randomized verification of the scalar cosh inequalities and identities the
// energy estimates rest on.  Margins are oriented so that negative means
// violated; violation counting is relative to the dominant side.
inline constexpr Real kCheckTol = 1e-12;

struct CheckReport {
  std::string check_name;
  long samples = 0;
  long violations = 0;
  Real worst_margin = 0;  // most adverse relative margin seen
  std::string worst_input;
  std::uint64_t seed = 0;
};

// |cosh b - cosh a| <= (1/2)|b^2 - a^2| (cosh a + cosh b).
// Returns RHS - LHS; evaluated through logs when max(|a|,|b|) > 300 so any
// real arguments are accepted.
Real check_cosh_difference(Real a, Real b);

// prod_j cosh r_j = 2^{1-p} sum over independent signs s_2..s_p of
// cosh(r_1 + sum_j s_j r_j).  Returns the relative residual |LHS-RHS|/LHS.
// Requires 1 <= p <= 12 and r_j >= 0.
Real check_product_identity(std::span<const Real> r);

// For xi = sum_j xi_j:  |1 - cosh|xi| prod_j sech|xi_j||
//   margin  : against 2^p sum over ordered pairs j != k of |xi_j||xi_k|
//   margin2 : against p^2 2^p |xi_(1)||xi_(2)| with the two largest norms.
// Requires p >= 2 and |xi_j| <= 50 per vector.
struct SechMargins {
  Real margin = 0;
  Real margin2 = 0;
};
SechMargins check_product_sech(std::span<const std::array<Real, 3>> xi,
                               int dim);

// (cosh r - e^r/2, e^r - cosh r), both >= 0 for r >= 0.
std::pair<Real, Real> check_exp_cosh_sandwich(Real r);

// Seeded suites; each worker owns the sub-stream seed + worker index and a
// contiguous sample range, so reports merge deterministically.
CheckReport run_cosh_difference_suite(long samples, std::uint64_t seed,
                                      int threads = 1);
CheckReport run_cosh_deficit_suite(long samples, std::uint64_t seed,
                                   int threads = 1);
CheckReport run_product_identity_suite(long samples, std::uint64_t seed,
                                       int p = 5, int threads = 1);
CheckReport run_product_sech_suite(long samples, std::uint64_t seed, int p,
                                   int dim, int threads = 1);
CheckReport run_exp_cosh_sandwich_suite(long samples, std::uint64_t seed,
                                        int threads = 1);

// ||u^p||_{H^{sigma,0}} / ||u||^p_{H^{sigma,2}} over Gaussian band-limited
// fields, with the exp-conjugated form of the numerator evaluated as an
// algebraic cross-check (the two routes must agree to 1e-10 relative).
struct NonlinearEstimateStats {
  long samples = 0;
  Real max_ratio = 0;
  Real p95_ratio = 0;
  Real worst_form_disagreement = 0;
};

NonlinearEstimateStats check_nonlinear_estimate(const Grid& grid, Real sigma,
                                                int p, long n_fields,
                                                int band, std::uint64_t seed);

namespace detail {
// Relative margin (margin / dominant side) used by the suites.
Real cosh_difference_rel_margin(Real a, Real b);
}  // namespace detail

}  // namespace nlbeam
