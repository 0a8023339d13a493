#include "nlbeam/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>

#include "nlbeam/sampler.hpp"
#include "nlbeam/transform.hpp"

namespace nlbeam {

namespace {

constexpr Real kNaN = std::numeric_limits<Real>::quiet_NaN();

std::string bool_cell(bool v) { return v ? "true" : "false"; }

// Shared command wrapper: validate first (usage errors leave no outputs),
// then run the body inside a run directory with a manifest either way.
int run_command(const RunConfig& cfg, const std::string& command,
                const std::function<std::string(RunDirectory&)>& body) {
  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  }
  RunDirectory dir(cfg.out);
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&t0] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         t0)
        .count();
  };
  std::string status = "ok";
  std::string error;
  int code = kExitOk;
  try {
    status = body(dir);
    if (status == "violations") code = kExitViolation;
  } catch (const ConfigError& e) {
    status = "error";
    error = e.what();
    code = kExitUsage;
  } catch (const Error& e) {
    status = "error";
    error = e.what();
    code = kExitRuntime;
  }
  dir.write_manifest(command, config_hash(cfg), serialize_config(cfg), status,
                     error, elapsed());
  if (!error.empty()) std::cerr << command << ": " << error << "\n";
  for (const std::string& w : dir.warnings())
    std::cerr << "warning: " << w << "\n";
  return code;
}

void monitor_boundary(RunDirectory& dir, const Trajectory& traj) {
  // The box stands in for the whole space; flag any checkpointed state whose
  // boundary amplitude is no longer negligible.  First and last checkpoints
  // bracket the run.
  Real worst = 0;
  Real worst_t = 0;
  for (const State* st : {&traj.states.front(), &traj.states.back()}) {
    const Real ratio = boundary_amplitude_ratio(inverse_transform(st->u));
    if (ratio > worst) {
      worst = ratio;
      worst_t = st->time;
    }
  }
  if (worst > kBoundaryWarnRatio)
    dir.warn("box-boundary amplitude ratio " + fmt_real(worst) + " at t = " +
             fmt_real(worst_t) + " exceeds " + fmt_real(kBoundaryWarnRatio) +
             "; the box may be too small for this run");
}

void write_energy_csv(RunDirectory& dir, const Trajectory& traj) {
  CsvWriter csv(dir.file("energy.csv"),
                {"time", "kinetic", "bending", "mass", "potential", "total"});
  for (const EnergyReport& e : traj.energies)
    csv.row({fmt_real(e.time), fmt_real(e.kinetic), fmt_real(e.bending),
             fmt_real(e.mass), fmt_real(e.potential), fmt_real(e.total)});
}

}  // namespace

State initial_state(const RunConfig& cfg) {
  const Grid grid = config_grid(cfg);
  return build_state(grid, config_params(cfg), cfg.u0, cfg.u1);
}

Trajectory run_trajectory(const RunConfig& cfg) {
  const State st = initial_state(cfg);
  const IntegrateOptions opt = config_integrate_options(cfg);
  return integrate(st, cfg.T, cfg.dt, opt.scheme, opt);
}

RadiusTrack analyze_radius_series(const Trajectory& traj,
                                  const FitPolicy& policy, Real sigma0,
                                  Real c_fit) {
  RadiusTrack track;
  track.sigma0 = sigma0;
  track.c_fit_used = c_fit > 0 ? c_fit : kCalibratedResidualC;

  const State& first = traj.states.front();
  track.e_sigma0 = modified_energy(first, sigma0).value;
  const int p = first.params.p;
  // bound(t) = min(sigma0, c_hat / sqrt(t)) = continuation_radius(t, ...).
  track.c_hat = std::sqrt(std::pow(2 * track.e_sigma0, (1.0 - p) / 2) /
                          track.c_fit_used);

  for (const State& st : traj.states) {
    RadiusSeriesPoint pt;
    pt.time = st.time;
    try {
      pt.estimate = estimate_radius(st.u, policy);
      pt.ok = true;
    } catch (const Error& e) {
      pt.error = e.what();
      ++track.n_failed;
    }
    track.points.push_back(std::move(pt));
  }

  track.verdict = true;
  for (const RadiusSeriesPoint& pt : track.points) {
    if (!pt.ok) continue;
    const Real t = pt.time - first.time;
    const Real bound =
        t > 0 ? continuation_radius(t, track.e_sigma0, track.c_fit_used, p,
                                    sigma0)
              : sigma0;
    if (pt.estimate.sigma_est < bound) track.verdict = false;
  }

  // Late-time exponent: fit log sigma_est against log t over the second half
  // of the run (estimable, t > 0 checkpoints).
  const Real t_end = track.points.back().time - first.time;
  std::vector<Real> lx, ly;
  for (const RadiusSeriesPoint& pt : track.points) {
    const Real t = pt.time - first.time;
    if (!pt.ok || t <= 0 || t < t_end / 2 || pt.estimate.sigma_est <= 0)
      continue;
    lx.push_back(std::log(t));
    ly.push_back(std::log(pt.estimate.sigma_est));
  }
  if (lx.size() >= 2) {
    const Real mx =
        std::accumulate(lx.begin(), lx.end(), Real(0)) / lx.size();
    const Real my =
        std::accumulate(ly.begin(), ly.end(), Real(0)) / ly.size();
    Real sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
    }
    track.gamma = sxx > 0 ? -sxy / sxx : kNaN;
  } else {
    track.gamma = kNaN;
  }
  return track;
}

int cmd_simulate(const RunConfig& cfg) {
  return run_command(cfg, "simulate", [&](RunDirectory& dir) {
    const Trajectory traj = run_trajectory(cfg);
    write_energy_csv(dir, traj);
    monitor_boundary(dir, traj);
    const Real e0 = traj.energies.front().total;
    Real drift = 0;
    for (const EnergyReport& e : traj.energies)
      drift = std::max(drift, std::abs(e.total - e0) /
                                  std::max(std::abs(e0), Real(1e-300)));
    std::cout << "simulate: " << traj.states.size() << " checkpoints to t = "
              << fmt_real(traj.states.back().time)
              << ", relative energy drift " << fmt_real(drift) << "\n";
    return "ok";
  });
}

int cmd_track_radius(const RunConfig& cfg) {
  return run_command(cfg, "track-radius", [&](RunDirectory& dir) {
    const Trajectory traj = run_trajectory(cfg);
    write_energy_csv(dir, traj);
    monitor_boundary(dir, traj);
    const RadiusTrack track = analyze_radius_series(
        traj, config_fit_policy(cfg), cfg.sigma0, cfg.c_fit);

    CsvWriter csv(dir.file("radius.csv"),
                  {"time", "sigma_est", "residual", "n_modes", "capped"});
    for (const RadiusSeriesPoint& pt : track.points) {
      if (!pt.ok) {
        dir.warn("radius estimate failed at t = " + fmt_real(pt.time) + ": " +
                 pt.error);
        continue;
      }
      csv.row({fmt_real(pt.time), fmt_real(pt.estimate.sigma_est),
               fmt_real(pt.estimate.residual),
               std::to_string(pt.estimate.n_modes_used),
               bool_cell(pt.estimate.capped)});
    }

    JsonlWriter jsonl(dir.file("radius_fit.jsonl"));
    Json j;
    j["check"] = "radius-lower-bound";
    j["sigma0"] = fmt_real(track.sigma0);
    j["e_sigma0"] = fmt_real(track.e_sigma0);
    j["c_fit_used"] = fmt_real(track.c_fit_used);
    j["c_hat"] = fmt_real(track.c_hat);
    j["gamma"] = fmt_real(track.gamma);
    j["n_failed"] = track.n_failed;
    j["verdict"] = track.verdict;
    jsonl.write(j);

    std::cout << "track-radius: sigma_est(t) >= min(sigma0, c_hat/sqrt(t)) "
                 "at all checkpoints: "
              << (track.verdict ? "yes" : "NO") << " (sigma0 = "
              << fmt_real(track.sigma0) << ", c_hat = "
              << fmt_real(track.c_hat) << ", gamma = "
              << fmt_real(track.gamma) << ")\n";
    return track.verdict ? "ok" : "violations";
  });
}

int cmd_sweep_sigma(const RunConfig& cfg) {
  return run_command(cfg, "sweep-sigma", [&](RunDirectory& dir) {
    if (cfg.sigmas.empty())
      throw ConfigError("analyticity.sigmas: required for sweep-sigma");
    const Trajectory traj = run_trajectory(cfg);
    write_energy_csv(dir, traj);
    monitor_boundary(dir, traj);
    const Real window = cfg.delta_window > 0 ? cfg.delta_window : cfg.T;
    const DriftTable table =
        sigma_drift_sweep(traj.states, cfg.sigmas, window);

    CsvWriter csv(dir.file("drift.csv"),
                  {"sigma", "delta", "sup_drift", "ratio"});
    for (const DriftRow& row : table.rows)
      csv.row({fmt_real(row.sigma), fmt_real(row.delta),
               fmt_real(row.sup_drift), fmt_real(row.ratio)});

    Real ratio_min = kNaN, ratio_max = kNaN;
    int n_valid = 0;
    for (const DriftRow& row : table.rows) {
      if (!row.valid || !(row.sigma > 0) || !std::isfinite(row.ratio))
        continue;
      ++n_valid;
      ratio_min = std::isnan(ratio_min) ? row.ratio
                                        : std::min(ratio_min, row.ratio);
      ratio_max = std::isnan(ratio_max) ? row.ratio
                                        : std::max(ratio_max, row.ratio);
    }

    JsonlWriter jsonl(dir.file("drift_summary.jsonl"));
    Json j;
    j["check"] = "drift-scaling";
    j["loglog_slope"] = fmt_real(table.loglog_slope);
    j["ratio_min"] = fmt_real(ratio_min);
    j["ratio_max"] = fmt_real(ratio_max);
    j["rows_valid"] = n_valid;
    j["rows_total"] = static_cast<int>(table.rows.size());
    jsonl.write(j);

    std::cout << "sweep-sigma: drift slope " << fmt_real(table.loglog_slope)
              << " over " << n_valid << " rows, ratio range ["
              << fmt_real(ratio_min) << ", " << fmt_real(ratio_max) << "]\n";
    return "ok";
  });
}

int cmd_verify_lemmas(const RunConfig& cfg) {
  return run_command(cfg, "verify-lemmas", [&](RunDirectory& dir) {
    std::vector<CheckReport> reports;
    reports.push_back(
        run_cosh_difference_suite(cfg.samples, cfg.seed, cfg.threads));
    reports.push_back(
        run_cosh_deficit_suite(cfg.samples, cfg.seed, cfg.threads));
    reports.push_back(
        run_product_identity_suite(cfg.samples, cfg.seed, 5, cfg.threads));

    // Exhaustive lattice tuples r_j in {0, 0.5, ..., 5} for p <= 4.
    {
      CheckReport lattice;
      lattice.check_name = "product-identity-lattice";
      lattice.seed = 0;
      Real worst = 0;  // identity margin = -residual, so track max residual
      std::string worst_input;
      for (int p = 1; p <= 4; ++p) {
        std::vector<int> idx(p, 0);
        while (true) {
          std::vector<Real> r(p);
          for (int j = 0; j < p; ++j) r[j] = idx[j] * 0.5;
          const Real residual = check_product_identity(r);
          ++lattice.samples;
          if (residual > kCheckTol) ++lattice.violations;
          if (residual > worst) {
            worst = residual;
            worst_input = "p=" + std::to_string(p);
            for (int j = 0; j < p; ++j)
              worst_input += ";r" + std::to_string(j + 1) + "=" +
                             fmt_real(r[j]);
          }
          int carry = p - 1;
          while (carry >= 0 && ++idx[carry] > 10) idx[carry--] = 0;
          if (carry < 0) break;
        }
      }
      lattice.worst_margin = -worst;
      lattice.worst_input = worst_input;
      reports.push_back(lattice);
    }

    for (int p : {3, 5})
      for (int dim : {1, 2, 3})
        reports.push_back(run_product_sech_suite(cfg.samples, cfg.seed, p,
                                                 dim, cfg.threads));
    reports.push_back(
        run_exp_cosh_sandwich_suite(cfg.samples, cfg.seed, cfg.threads));

    // Deterministic sweep of the sandwich across the whole safe exp range.
    {
      CheckReport sweep;
      sweep.check_name = "exp-cosh-sandwich-sweep";
      sweep.seed = 0;
      Real worst = std::numeric_limits<Real>::infinity();
      Real worst_r = 0;
      auto probe = [&](Real r) {
        const auto [lower, upper] = check_exp_cosh_sandwich(r);
        const Real dom = std::max(std::exp(r), Real(1));
        const Real rel = std::min(lower / dom, upper / dom);
        ++sweep.samples;
        if (rel < -kCheckTol) ++sweep.violations;
        if (rel < worst) {
          worst = rel;
          worst_r = r;
        }
      };
      probe(0);
      const int n_pts = 2000;
      for (int i = 0; i <= n_pts; ++i)
        probe(1e-6 * std::pow(700.0 / 1e-6, static_cast<Real>(i) / n_pts));
      sweep.worst_margin = worst;
      sweep.worst_input = "r=" + fmt_real(worst_r);
      reports.push_back(sweep);
    }

    JsonlWriter jsonl(dir.file("lemma_reports.jsonl"));
    long total_violations = 0;
    for (const CheckReport& r : reports) {
      jsonl.write(check_report_json(r));
      total_violations += r.violations;
      std::cout << r.check_name << ": samples=" << r.samples
                << " violations=" << r.violations << " worst_margin="
                << fmt_real(r.worst_margin) << "\n";
    }
    std::cout << "verify-lemmas: " << reports.size() << " checks, "
              << total_violations << " violations\n";
    return total_violations == 0 ? "ok" : "violations";
  });
}

int cmd_fit_lower_bound(const RunConfig& cfg) {
  return run_command(cfg, "fit-lower-bound", [&](RunDirectory& dir) {
    const Grid grid = config_grid(cfg);
    const long n_fields = std::min<long>(cfg.samples, 10000);
    std::vector<Real> sigma_grid = cfg.sigmas;
    if (sigma_grid.empty()) {
      // Log-spaced across the residual-law window.
      for (int i = 0; i <= 6; ++i)
        sigma_grid.push_back(1e-3 *
                             std::pow(100.0, static_cast<Real>(i) / 6));
    }

    Rng rng(cfg.seed);
    std::vector<Real> ratios;
    ratios.reserve(n_fields * sigma_grid.size());
    for (long i = 0; i < n_fields; ++i) {
      SpectralField f = sample_band_limited(grid, cfg.u0.band, rng);
      normalize_h2(f, 1);
      for (Real sigma : sigma_grid)
        ratios.push_back(residual_ratio(f, sigma, cfg.p));
    }
    std::sort(ratios.begin(), ratios.end());
    const std::size_t idx = static_cast<std::size_t>(std::max<long>(
        0,
        static_cast<long>(std::ceil(0.95 * ratios.size())) - 1));
    const Real c_fit = ratios[idx];

    const State st = initial_state(cfg);
    const Real e0 = modified_energy(st, cfg.sigma0).value;

    CsvWriter csv(dir.file("lower_bound.csv"), {"time", "bound"});
    const int n_pts = 100;
    for (int i = 0; i <= n_pts; ++i) {
      const Real t =
          cfg.T / 100 * std::pow(100.0, static_cast<Real>(i) / n_pts);
      csv.row({fmt_real(t), fmt_real(continuation_radius(
                                t, e0, c_fit, cfg.p, cfg.sigma0))});
    }

    JsonlWriter jsonl(dir.file("fit_summary.jsonl"));
    Json j;
    j["check"] = "residual-constant-fit";
    j["c_fit"] = fmt_real(c_fit);
    j["quantile"] = 0.95;
    j["n_fields"] = n_fields;
    j["n_ratios"] = static_cast<long>(ratios.size());
    j["ratio_max"] = fmt_real(ratios.back());
    Json sg = Json::array();
    for (Real s : sigma_grid) sg.push_back(fmt_real(s));
    j["sigma_grid"] = sg;
    j["p"] = cfg.p;
    j["e_sigma0"] = fmt_real(e0);
    j["sigma0"] = fmt_real(cfg.sigma0);
    jsonl.write(j);

    std::cout << "fit-lower-bound: c_fit = " << fmt_real(c_fit) << " (p95 of "
              << ratios.size() << " ratios), e_sigma0 = " << fmt_real(e0)
              << "\n";
    return "ok";
  });
}

int cmd_dump_spectrum(const RunConfig& cfg) {
  return run_command(cfg, "dump-spectrum", [&](RunDirectory& dir) {
    const Grid grid = config_grid(cfg);
    const SpectralField f = build_field(grid, cfg.u0);

    std::vector<std::string> header;
    for (int axis = 0; axis < grid.dim(); ++axis)
      header.push_back("k" + std::to_string(axis + 1));
    header.push_back("abs_coeff");
    header.push_back("log_abs_coeff");
    CsvWriter csv(dir.file("spectrum.csv"), header);

    long nonzero = 0;
    for (Index k = 0; k < grid.size(); ++k) {
      const auto ix = grid.unflatten(k);
      std::vector<std::string> cells;
      for (int axis = 0; axis < grid.dim(); ++axis)
        cells.push_back(std::to_string(grid.axis_wavenumber(ix[axis])));
      const Real a = std::abs(f.coeffs[k]);
      if (a > 0) ++nonzero;
      cells.push_back(fmt_real(a));
      cells.push_back(fmt_real(std::log(a)));
      csv.row(cells);
    }
    std::cout << "dump-spectrum: " << grid.size() << " modes, " << nonzero
              << " nonzero\n";
    return "ok";
  });
}

}  // namespace nlbeam
