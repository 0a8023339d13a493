// Command-line front end: one subcommand per experiment, shared flags.
// Option precedence: config file < NLBEAM_* environment < command line.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nlbeam/config.hpp"
#include "nlbeam/experiments.hpp"
#include "nlbeam/io.hpp"
#include "nlbeam/types.hpp"

namespace {

using namespace nlbeam;

struct CliFlags {
  std::string config_path;
  std::string out;
  std::uint64_t seed = 0;
  int threads = 0;
  double samples = 0;  // double so "1e6" parses
};

int dispatch(const std::string& name, const RunConfig& cfg) {
  if (name == "simulate") return cmd_simulate(cfg);
  if (name == "track-radius") return cmd_track_radius(cfg);
  if (name == "sweep-sigma") return cmd_sweep_sigma(cfg);
  if (name == "verify-lemmas") return cmd_verify_lemmas(cfg);
  if (name == "fit-lower-bound") return cmd_fit_lower_bound(cfg);
  if (name == "dump-spectrum") return cmd_dump_spectrum(cfg);
  std::cerr << "nlbeam: unknown command '" << name << "'\n";
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral solver for the nonlinear beam equation with "
               "analyticity-radius tracking"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "nlbeam 0.1.0");

  CliFlags flags;
  auto* opt_config =
      app.add_option("--config", flags.config_path, "INI config file");
  auto* opt_out = app.add_option("--out", flags.out, "output directory");
  auto* opt_seed = app.add_option("--seed", flags.seed, "RNG seed");
  auto* opt_threads =
      app.add_option("--threads", flags.threads, "worker threads");
  auto* opt_samples = app.add_option(
      "--samples", flags.samples, "sample count (accepts e-notation)");

  app.add_subcommand("simulate", "integrate and record energy drift");
  app.add_subcommand("track-radius",
                     "integrate and track the analyticity radius");
  app.add_subcommand("sweep-sigma",
                     "modified-energy drift across a sigma grid");
  app.add_subcommand("verify-lemmas",
                     "randomized checks of the scalar inequalities");
  app.add_subcommand("fit-lower-bound",
                     "fit the constant in the radius lower bound");
  app.add_subcommand("dump-spectrum", "write initial-data spectrum as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help/--version exit 0; every parse failure is a usage error.
    const int code = app.exit(e);
    return code == 0 ? nlbeam::kExitOk : nlbeam::kExitUsage;
  }

  using nlbeam::ConfigError;
  using nlbeam::Error;
  using nlbeam::RunConfig;

  RunConfig cfg;
  try {
    if (opt_config->count() > 0) {
      cfg = nlbeam::parse_config_file(flags.config_path);
    } else {
      nlbeam::apply_env_overrides(cfg);
    }
    if (opt_out->count() > 0) cfg.out = flags.out;
    if (opt_seed->count() > 0) cfg.seed = flags.seed;
    if (opt_threads->count() > 0) cfg.threads = flags.threads;
    if (opt_samples->count() > 0) {
      if (!(flags.samples >= 1) ||
          flags.samples != std::floor(flags.samples) || flags.samples > 1e15)
        throw ConfigError("--samples must be a positive integer, got " +
                          std::to_string(flags.samples));
      cfg.samples = static_cast<long>(flags.samples);
    }
  } catch (const ConfigError& e) {
    std::cerr << "nlbeam: config error: " << e.what() << "\n";
    return nlbeam::kExitUsage;
  } catch (const Error& e) {
    std::cerr << "nlbeam: " << e.what() << "\n";
    return nlbeam::kExitRuntime;
  }

  return dispatch(app.get_subcommands().front()->get_name(), cfg);
}
