#pragma once

#include <functional>
#include <vector>

#include "nlbeam/field.hpp"

namespace nlbeam {

// u_tt + (m + Laplacian^2) u + lambda * u^p = 0 as a first-order system in
// (u, u_t); both the Duhamel solver and the modified energy need u_t
// explicitly.  nonlinear_coefficient (lambda) scales the nonlinearity; 0
// switches it off, which turns the quadratic energy into the conserved
// functional of the remaining linear flow.
struct BeamParams {
  Real m = 1;
  int p = 3;
  Real nonlinear_coefficient = 1;
};

struct State {
  SpectralField u;
  SpectralField ut;
  Real time = 0;
  BeamParams params;
};

struct EnergyReport {
  Real kinetic = 0;    // (1/2) int u_t^2
  Real bending = 0;    // (1/2) int (Lap u)^2
  Real mass = 0;       // (m/2) int u^2
  Real potential = 0;  // (lambda/(p+1)) int |u|^{p+1}
  Real total = 0;
  Real time = 0;
};

State make_state(SpectralField u, SpectralField ut, Real time,
                 const BeamParams& params);

// Exact per-mode rotation by the linear flow: with w = sqrt(m + |xi|^4),
//   u  <- cos(dt w) u + (sin(dt w)/w) u_t
//   ut <- -w sin(dt w) u + cos(dt w) u_t.
// dt may be negative; the per-mode matrix has determinant 1.
State linear_propagate(const State& st, Real dt);

// Quadratic parts by Parseval; the potential by exact (dealiased) quadrature.
EnergyReport energy(const State& st);

inline constexpr Real kDefaultDeltaMax = 1.0;

// Local window delta = c0 * (||u||_{H^{sigma,2}} + ||u_t||_{H^{sigma,0}})^{-(p-1)}
// with cosh weights, capped by delta_max.  p = 1 (or zero data) gives the cap.
Real local_existence_time(const State& st, Real sigma, Real c0,
                          Real delta_max = kDefaultDeltaMax);

// Window constant in the local-solve heuristic.  Conservative: observed
// contraction ratios stay below 1.3e-3 even at 16x this window over
// band-limited data with combined norm in [0.5, 16].
inline constexpr Real kPicardC0 = 0.5;

struct PicardResult {
  std::vector<State> states;  // nodes 0..n_steps, times t0 + j*delta/n_steps
  int iterations = 0;
  std::vector<Real> contraction_ratios;  // diff_i / diff_{i-1}
  Real last_diff = 0;
  bool delta_exceeds_heuristic = false;
};

// Fixed-point iteration of the Duhamel map on [0, delta], nodes by composite
// trapezoid, propagator applied exactly at every lag.  Successive iterates
// must differ by < tol in H^{sigma,2} x H^{sigma,0} at every node.  Throws
// ContractionError (with the last ratio) after max_iter without convergence.
PicardResult picard_local_solve(const State& st, Real delta, int n_steps,
                                Real tol, int max_iter, Real sigma = 0);

enum class Scheme { StrangSplit, PicardChain };

struct IntegrateOptions {
  Scheme scheme = Scheme::StrangSplit;
  // Checkpoint every `output_stride` steps; 0 = choose automatically so a run
  // keeps at most ~1000 checkpoints.
  int output_stride = 0;
  // Abort when |E(t) - E(0)| / max(E(0), eps) exceeds this at a checkpoint.
  Real energy_drift_abort = 1e-3;
  // PicardChain window controls.
  Real picard_sigma = 0;
  Real picard_c0 = kPicardC0;
  Real delta_max = kDefaultDeltaMax;
  int picard_steps = 16;
  Real picard_tol = 1e-12;
  int picard_max_iter = 60;
};

struct Trajectory {
  std::vector<State> states;          // checkpoints, including t = 0
  std::vector<EnergyReport> energies;  // one per checkpoint
};

// StrangSplit: half kick (u_t -= (dt/2) lambda u^p, dealiased), exact linear
// propagate, half kick.  PicardChain: repeated local Duhamel windows.
Trajectory integrate(const State& st, Real T, Real dt, Scheme scheme,
                     const IntegrateOptions& options = {});

// One step of u_tt + (m + Lap^2) u = F(t) with the inhomogeneous Duhamel
// formula; F sampled at `quad_nodes` composite-trapezoid nodes, the propagator
// applied exactly at each lag.  quad_nodes >= 2.
State forced_linear_step(const State& st,
                         const std::function<RealField(Real)>& forcing,
                         Real dt, int quad_nodes);

}  // namespace nlbeam
