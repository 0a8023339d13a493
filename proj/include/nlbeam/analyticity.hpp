#pragma once

#include <utility>
#include <vector>

#include "nlbeam/solver.hpp"

namespace nlbeam {

// v = cosh(sigma |D|) u applied to both components; identity at sigma = 0.
State gevrey_lift(const State& st, Real sigma);

struct ModifiedEnergyReport {
  Real sigma = 0;
  Real value = 0;  // == parts.total
  EnergyReport parts;
  Real time = 0;
};

// energy(gevrey_lift(st, sigma)): same quadratures, so sigma = 0 reproduces
// energy(st) bit-for-bit.
ModifiedEnergyReport modified_energy(const State& st, Real sigma);

// N_p(v) = v^p - cosh(sigma|D|) [sech(sigma|D|) v]^p, dealiased powers.
// Identically zero at sigma = 0; zero to roundoff at p = 1.
SpectralField np_residual(const SpectralField& v, Real sigma, int p);

// ||N_p(v)||_{L2} / (sigma^2 ||v||_{H2}^p).  Approaches a constant as
// sigma -> 0 (the quadratic residual law); sigma = 0 is an error.
Real residual_ratio(const SpectralField& v, Real sigma, int p);

// Spectral-decay fit against the model |c(xi)| ~ C <xi>^{-prefactor_s}
// e^{-sigma_est |xi|}, over radially binned max-modulus amplitudes.  Window
// keeps amplitudes in (noise_floor * max, max/10] (the top decade biases the
// slope).  Rates at or above log(1/noise_floor)/|xi_max| mean the spectrum
// bottoms out inside the grid; estimates are clamped there and flagged
// capped, which is where super-exponential (entire) profiles land.
struct FitPolicy {
  Real noise_floor = 1e-13;
  bool drop_top_decade = true;
  Real prefactor_s = 0;  // declared <xi>^{-prefactor_s} factor, divided out
  int min_modes = 8;
};

struct RadiusEstimate {
  Real sigma_est = 0;
  Real window_lo = 0;  // smallest |xi| used in the fit
  Real window_hi = 0;  // largest |xi| used in the fit
  Real residual = 0;   // rms misfit of the line
  int n_modes_used = 0;
  bool capped = false;
};

RadiusEstimate estimate_radius(const SpectralField& c,
                               const FitPolicy& policy = {});

Real sigma_cap(const Grid& grid, const FitPolicy& policy = {});

// One row per sigma: sup over checkpoints in [t0, t0+delta] of
// |E_sigma(t) - E_sigma(0)|, and the normalized ratio
// sup_drift / (delta sigma^2 E_sigma(0)^{(p+1)/2}).  A row whose lift
// overflows is marked invalid instead of failing the sweep; the sigma = 0
// row reports the integrator's own conservation error (ratio NaN).
struct DriftRow {
  Real sigma = 0;
  Real delta = 0;
  Real sup_drift = 0;
  Real ratio = 0;
  bool valid = true;
};

struct DriftTable {
  std::vector<DriftRow> rows;
  Real loglog_slope = 0;  // slope of log sup_drift vs log sigma (valid rows)
};

DriftTable sigma_drift_sweep(const std::vector<State>& checkpoints,
                             const std::vector<Real>& sigmas,
                             Real delta_window);

// min{ sigma0, sqrt( (2 E0)^{(1-p)/2} / (C_fit T) ) }: the strip width that
// the lifted-energy continuation argument guarantees up to time T.
Real continuation_radius(Real T, Real E0, Real C_fit, int p, Real sigma0);

}  // namespace nlbeam
