#pragma once

#include <string>
#include <vector>

#include "nlbeam/config.hpp"
#include "nlbeam/io.hpp"

namespace nlbeam {

// Calibrated surrogate for the residual-law constant: 95th percentile of
// residual_ratio over the random band-limited corpus (see fit-lower-bound;
// p = 3, 1D, N = 64, box 4*pi, band 8, sigma in [1e-3, 1e-1]), rounded up
// from the 0.0059 - 0.0067 range observed over seeds 1-8 with corpora of
// 2000 and 5000 fields.  A larger value weakens the certified floor, so
// rounding up is the conservative direction.  The underlying constant is
// non-constructive; this value is an artifact quantity, reproducible from
// `nlbeam fit-lower-bound --config configs/residual_fit.cfg`.
inline constexpr Real kCalibratedResidualC = 0.0067;

struct RadiusSeriesPoint {
  Real time = 0;
  RadiusEstimate estimate;
  bool ok = false;
  std::string error;
};

struct RadiusTrack {
  std::vector<RadiusSeriesPoint> points;
  Real sigma0 = 0;
  Real e_sigma0 = 0;   // lifted energy of the initial state at sigma0
  Real c_fit_used = 0;
  Real c_hat = 0;      // bound(t) = min(sigma0, c_hat / sqrt(t))
  Real gamma = 0;      // fitted late-time exponent of sigma_est(t)
  bool verdict = false;  // sigma_est >= bound at every estimable checkpoint
  int n_failed = 0;
};

// Radius estimates along a trajectory plus the lower-bound comparison.
// c_fit = 0 selects the built-in calibrated constant.
RadiusTrack analyze_radius_series(const Trajectory& traj,
                                  const FitPolicy& policy, Real sigma0,
                                  Real c_fit);

State initial_state(const RunConfig& cfg);
Trajectory run_trajectory(const RunConfig& cfg);

// Subcommand bodies; each validates, runs, writes its outputs into
// cfg.out, and returns a process exit code.
int cmd_simulate(const RunConfig& cfg);
int cmd_track_radius(const RunConfig& cfg);
int cmd_sweep_sigma(const RunConfig& cfg);
int cmd_verify_lemmas(const RunConfig& cfg);
int cmd_fit_lower_bound(const RunConfig& cfg);
int cmd_dump_spectrum(const RunConfig& cfg);

}  // namespace nlbeam
