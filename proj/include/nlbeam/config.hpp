#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlbeam/analyticity.hpp"
#include "nlbeam/initial_data.hpp"
#include "nlbeam/solver.hpp"

namespace nlbeam {

// Plain-text sectioned key/value configuration.  Every knob of every
// experiment lives here; a config plus a seed reproduces a run byte for
// byte.  Unknown keys are errors (diffable provenance beats forgiveness).
//
// Precedence: file < environment (NLBEAM_<SECTION>_<KEY>) < CLI flags.
struct RunConfig {
  // [grid]
  int dim = 1;
  int n = 64;
  Real length = 12.566370614359172953850573533118;  // 4 pi

  // [physics]
  Real m = 1;
  int p = 3;
  Real lambda = 1;  // nonlinear coefficient; 0 switches the nonlinearity off

  // [data]
  Real sigma0 = 0;
  InitialDataSpec u0;
  InitialDataSpec u1;

  // [scheme]
  std::string integrator = "strang";  // strang | picard
  Real dt = 1e-3;
  Real T = 1;
  int output_stride = 0;  // 0 = auto (~1000 checkpoints)
  Real energy_drift_abort = 1e-3;
  Real picard_sigma = 0;
  Real picard_c0 = kPicardC0;
  Real delta_max = kDefaultDeltaMax;
  int picard_steps = 16;
  Real picard_tol = 1e-12;
  int picard_max_iter = 60;

  // [analyticity]
  std::vector<Real> sigmas;  // sweep grid, strictly increasing
  Real delta_window = 0;     // 0 = the whole run [0, T]
  Real noise_floor = 1e-13;
  bool drop_top_decade = true;
  Real prefactor_s = 0;
  int min_modes = 8;
  Real c_fit = 0;  // 0 = use the built-in calibrated constant

  // [run]
  std::uint64_t seed = 1;
  int threads = 1;
  long samples = 1000000;
  std::string out = "runs/out";
};

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin);
// Reads the file, then applies NLBEAM_* environment overrides.
RunConfig parse_config_file(const std::string& path);

// Applies NLBEAM_<SECTION>_<KEY> environment overrides in place.
void apply_env_overrides(RunConfig& cfg);

// Canonical section/key order, values %.17g: parsing the output reproduces
// the config exactly.
std::string serialize_config(const RunConfig& cfg);

// FNV-1a 64 over the canonical serialization, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

void validate_config(const RunConfig& cfg);

Grid config_grid(const RunConfig& cfg);
BeamParams config_params(const RunConfig& cfg);
IntegrateOptions config_integrate_options(const RunConfig& cfg);
FitPolicy config_fit_policy(const RunConfig& cfg);

}  // namespace nlbeam
