#include "nlbeam/analyticity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "nlbeam/multiplier.hpp"
#include "nlbeam/norms.hpp"
#include "nlbeam/power.hpp"

namespace nlbeam {

namespace {

constexpr Real kNaN = std::numeric_limits<Real>::quiet_NaN();

// Least-squares line y = a + b x; returns (a, b) and rms residual.
struct LineFit {
  Real intercept = 0;
  Real slope = 0;
  Real rms = 0;
};

LineFit fit_line(const std::vector<Real>& x, const std::vector<Real>& y) {
  const std::size_t n = x.size();
  Real mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  Real sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  Real ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Real r = y[i] - (f.intercept + f.slope * x[i]);
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace

State gevrey_lift(const State& st, Real sigma) {
  const MultiplierSpec lift = MultiplierSpec::cosh_sigma(sigma);
  State out = st;
  out.u = apply_multiplier(st.u, lift);
  out.ut = apply_multiplier(st.ut, lift);
  return out;
}

ModifiedEnergyReport modified_energy(const State& st, Real sigma) {
  ModifiedEnergyReport r;
  r.sigma = sigma;
  r.parts = energy(gevrey_lift(st, sigma));
  r.value = r.parts.total;
  r.time = st.time;
  return r;
}

SpectralField np_residual(const SpectralField& v, Real sigma, int p) {
  const SpectralField a =
      apply_multiplier(v, MultiplierSpec::sech_sigma(sigma));
  const SpectralField ap = dealiased_power(a, p);
  const SpectralField lifted =
      apply_multiplier(ap, MultiplierSpec::cosh_sigma(sigma));
  const SpectralField vp = dealiased_power(v, p);
  return SpectralField{v.grid, vp.coeffs - lifted.coeffs};
}

Real residual_ratio(const SpectralField& v, Real sigma, int p) {
  if (!(sigma > 0))
    throw ConfigError(
        "residual ratio is undefined at sigma = 0 (residual vanishes)");
  const Real num =
      weighted_norm(np_residual(v, sigma, p), {0, 0, NormSpec::Weight::None});
  const Real den = weighted_norm(v, {0, 2, NormSpec::Weight::None});
  if (den == 0) throw Error("residual ratio requires a nonzero field");
  return num / (sigma * sigma * std::pow(den, p));
}

Real sigma_cap(const Grid& grid, const FitPolicy& policy) {
  return std::log(1.0 / policy.noise_floor) / grid.max_abs_xi();
}

RadiusEstimate estimate_radius(const SpectralField& c,
                               const FitPolicy& policy) {
  if (!(policy.noise_floor > 0) || !(policy.noise_floor < 1))
    throw ConfigError("noise floor must lie in (0, 1)");
  const Real amax = c.coeffs.abs().maxCoeff();
  if (amax == 0) throw Error("cannot estimate a radius for the zero field");

  // Radial bins: max modulus per integer multiple of the fundamental, with
  // the exact |xi| of the representative mode.
  const Real k0 = c.grid.fundamental();
  std::map<long, std::pair<Real, Real>> bins;  // bin -> (amp, |xi|)
  const ArrayXr& r = c.grid.abs_xi();
  for (Index k = 0; k < c.coeffs.size(); ++k) {
    const Real a = std::abs(c.coeffs[k]);
    if (a == 0) continue;
    const long b = std::lround(r[k] / k0);
    auto it = bins.find(b);
    if (it == bins.end() || a > it->second.first)
      bins[b] = {a, r[k]};
  }

  const Real lo = policy.noise_floor * amax;
  const Real hi = policy.drop_top_decade
                      ? amax / 10
                      : std::numeric_limits<Real>::infinity();
  std::vector<Real> xs, ys;
  Real wlo = std::numeric_limits<Real>::infinity(), whi = 0;
  for (const auto& [b, entry] : bins) {
    const auto [a, xi] = entry;
    if (a <= lo || a > hi) continue;
    xs.push_back(xi);
    ys.push_back(std::log(a) +
                 policy.prefactor_s * 0.5 * std::log1p(xi * xi));
    wlo = std::min(wlo, xi);
    whi = std::max(whi, xi);
  }
  if (static_cast<int>(xs.size()) < policy.min_modes)
    throw Error("radius fit window has only " + std::to_string(xs.size()) +
                " usable modes (need " + std::to_string(policy.min_modes) +
                "); spectrum under-resolved");

  const LineFit fit = fit_line(xs, ys);
  RadiusEstimate est;
  est.sigma_est = std::max(Real(0), -fit.slope);
  est.window_lo = wlo;
  est.window_hi = whi;
  est.residual = fit.rms;
  est.n_modes_used = static_cast<int>(xs.size());
  const Real cap = sigma_cap(c.grid, policy);
  if (est.sigma_est > cap) {
    est.sigma_est = cap;
    est.capped = true;
  }
  return est;
}

DriftTable sigma_drift_sweep(const std::vector<State>& checkpoints,
                             const std::vector<Real>& sigmas,
                             Real delta_window) {
  if (checkpoints.empty()) throw ConfigError("drift sweep needs a trajectory");
  if (!(delta_window > 0)) throw ConfigError("drift window must be positive");
  for (std::size_t i = 1; i < sigmas.size(); ++i)
    if (!(sigmas[i] > sigmas[i - 1]))
      throw ConfigError("drift sweep sigmas must be strictly increasing");
  const Real t0 = checkpoints.front().time;
  const Real t_end = checkpoints.back().time;
  if (t_end - t0 < delta_window * (1 - 1e-9))
    throw ConfigError("trajectory does not cover the drift window");
  const int p = checkpoints.front().params.p;

  DriftTable table;
  for (Real sigma : sigmas) {
    DriftRow row;
    row.sigma = sigma;
    row.delta = delta_window;
    try {
      const Real e0 = modified_energy(checkpoints.front(), sigma).value;
      Real sup = 0;
      for (const State& st : checkpoints) {
        if (st.time - t0 > delta_window * (1 + 1e-9)) break;
        sup = std::max(sup, std::abs(modified_energy(st, sigma).value - e0));
      }
      row.sup_drift = sup;
      row.ratio = sigma > 0 ? sup / (delta_window * sigma * sigma *
                                     std::pow(e0, (p + 1) / 2.0))
                            : kNaN;
    } catch (const Error&) {
      row.valid = false;
      row.sup_drift = kNaN;
      row.ratio = kNaN;
    }
    table.rows.push_back(row);
  }

  std::vector<Real> lx, ly;
  for (const DriftRow& row : table.rows)
    if (row.valid && row.sigma > 0 && row.sup_drift > 0) {
      lx.push_back(std::log(row.sigma));
      ly.push_back(std::log(row.sup_drift));
    }
  table.loglog_slope = lx.size() >= 2 ? fit_line(lx, ly).slope : kNaN;
  return table;
}

Real continuation_radius(Real T, Real E0, Real C_fit, int p, Real sigma0) {
  if (!(T > 0)) throw ConfigError("continuation time must be positive");
  if (!(E0 > 0)) throw ConfigError("lifted energy must be positive");
  if (!(C_fit > 0)) throw ConfigError("fitted constant must be positive");
  if (!(sigma0 >= 0)) throw ConfigError("sigma0 must be >= 0");
  const Real branch =
      std::sqrt(std::pow(2 * E0, (1.0 - p) / 2) / (C_fit * T));
  return std::min(sigma0, branch);
}

}  // namespace nlbeam
