#include "nlbeam/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "nlbeam/norms.hpp"
#include "nlbeam/power.hpp"
#include "nlbeam/transform.hpp"

namespace nlbeam {

namespace {

void validate_params(const BeamParams& p) {
  if (!(p.m > 0) || !std::isfinite(p.m))
    throw ConfigError("mass parameter m must be positive and finite");
  if (p.p < 1 || p.p % 2 == 0)
    throw ConfigError("nonlinearity exponent p must be odd and >= 1; got " +
                      std::to_string(p.p));
  if (!(p.nonlinear_coefficient >= 0) ||
      !std::isfinite(p.nonlinear_coefficient))
    throw ConfigError("nonlinear coefficient must be finite and >= 0");
}

Real box_measure(const Grid& g) {
  return std::pow(g.box_length(), g.dim());
}

Real spectral_l2_sq(const SpectralField& f, const ArrayXr* weight_sq) {
  Real sum = 0;
  for (Index k = 0; k < f.coeffs.size(); ++k) {
    const Real a = std::abs(f.coeffs[k]);
    sum += (weight_sq ? (*weight_sq)[k] : 1.0) * a * a;
  }
  return box_measure(f.grid) * sum;
}

struct PropagatorTable {
  ArrayXr w;        // sqrt(m + |xi|^4)
  ArrayXr cos_dtw;  // cos(dt w)
  ArrayXr sin_dtw;  // sin(dt w)
};

PropagatorTable propagator_table(const Grid& g, Real m, Real dt) {
  const ArrayXr& r2 = g.abs_xi_sq();
  PropagatorTable t;
  t.w = (m + r2.square()).sqrt();
  t.cos_dtw = (dt * t.w).cos();
  t.sin_dtw = (dt * t.w).sin();
  return t;
}

void rotate(const PropagatorTable& t, ArrayXc& u, ArrayXc& ut) {
  for (Index k = 0; k < u.size(); ++k) {
    const Complex u0 = u[k], v0 = ut[k];
    const Real c = t.cos_dtw[k], s = t.sin_dtw[k], w = t.w[k];
    u[k] = c * u0 + (s / w) * v0;
    ut[k] = -w * s * u0 + c * v0;
  }
}

// u_t -= amount * u^p (dealiased); no-op for amount = 0.
void kick(State& st, Real amount) {
  if (amount == 0 || st.params.nonlinear_coefficient == 0) return;
  const SpectralField up = dealiased_power(st.u, st.params.p);
  st.ut.coeffs -= (amount * st.params.nonlinear_coefficient) * up.coeffs;
}

}  // namespace

State make_state(SpectralField u, SpectralField ut, Real time,
                 const BeamParams& params) {
  validate_params(params);
  if (!u.grid.same_as(ut.grid))
    throw ConfigError("state fields must share one grid");
  if (hermitian_asymmetry(u) > kHermitianTolerance ||
      hermitian_asymmetry(ut) > kHermitianTolerance)
    throw Error("state fields must be Hermitian-symmetric");
  if (!std::isfinite(time)) throw ConfigError("state time must be finite");
  return State{std::move(u), std::move(ut), time, params};
}

State linear_propagate(const State& st, Real dt) {
  const PropagatorTable t = propagator_table(st.u.grid, st.params.m, dt);
  State out = st;
  rotate(t, out.u.coeffs, out.ut.coeffs);
  out.time = st.time + dt;
  return out;
}

EnergyReport energy(const State& st) {
  const Grid& g = st.u.grid;
  EnergyReport e;
  e.time = st.time;
  e.kinetic = 0.5 * spectral_l2_sq(st.ut, nullptr);
  const ArrayXr weight4 = g.abs_xi_sq().square();
  e.bending = 0.5 * spectral_l2_sq(st.u, &weight4);
  e.mass = 0.5 * st.params.m * spectral_l2_sq(st.u, nullptr);
  const int q = st.params.p + 1;  // even, so |u|^{p+1} = u^{p+1}
  e.potential = st.params.nonlinear_coefficient / q * box_measure(g) *
                dealiased_mean_power(st.u, q);
  e.total = e.kinetic + e.bending + e.mass + e.potential;
  return e;
}

Real local_existence_time(const State& st, Real sigma, Real c0,
                          Real delta_max) {
  if (!(c0 > 0)) throw ConfigError("local window constant c0 must be > 0");
  if (!(delta_max > 0)) throw ConfigError("delta_max must be > 0");
  if (st.params.p == 1) return delta_max;
  const Real data_norm =
      weighted_norm(st.u, {sigma, 2, NormSpec::Weight::Cosh}) +
      weighted_norm(st.ut, {sigma, 0, NormSpec::Weight::Cosh});
  if (data_norm == 0) return delta_max;
  const Real delta = c0 * std::pow(data_norm, -(st.params.p - 1));
  return std::min(delta, delta_max);
}

PicardResult picard_local_solve(const State& st, Real delta, int n_steps,
                                Real tol, int max_iter, Real sigma) {
  if (!(delta > 0)) throw ConfigError("picard window must be positive");
  if (n_steps < 1) throw ConfigError("picard n_steps must be >= 1");
  if (!(tol > 0)) throw ConfigError("picard tol must be positive");
  if (max_iter < 1) throw ConfigError("picard max_iter must be >= 1");

  const Grid& g = st.u.grid;
  const Real lambda = st.params.nonlinear_coefficient;
  const int p = st.params.p;
  const Real h = delta / n_steps;
  const int n_nodes = n_steps + 1;

  PicardResult result;
  result.delta_exceeds_heuristic =
      delta > local_existence_time(st, sigma, kPicardC0);

  // Propagator tables at every lag j*h, j = 0..n_steps.
  std::vector<PropagatorTable> lag(n_nodes);
  for (int j = 0; j < n_nodes; ++j)
    lag[j] = propagator_table(g, st.params.m, j * h);

  // Homogeneous part at each node.
  std::vector<ArrayXc> lin_u(n_nodes), lin_ut(n_nodes);
  for (int j = 0; j < n_nodes; ++j) {
    lin_u[j] = st.u.coeffs;
    lin_ut[j] = st.ut.coeffs;
    rotate(lag[j], lin_u[j], lin_ut[j]);
  }

  std::vector<ArrayXc> u = lin_u, ut = lin_ut;
  const NormSpec norm_u{sigma, 2, NormSpec::Weight::Cosh};
  const NormSpec norm_ut{sigma, 0, NormSpec::Weight::Cosh};

  Real prev_diff = -1;
  for (int iter = 1; iter <= max_iter; ++iter) {
    // g_i = lambda * u^p at node i.
    std::vector<ArrayXc> rhs(n_nodes);
    if (lambda != 0) {
      for (int i = 0; i < n_nodes; ++i)
        rhs[i] = lambda *
                 dealiased_power(SpectralField{g, u[i]}, p).coeffs;
    }

    Real diff = 0;
    std::vector<ArrayXc> next_u(n_nodes), next_ut(n_nodes);
    for (int j = 0; j < n_nodes; ++j) {
      ArrayXc acc_u = lin_u[j];
      ArrayXc acc_ut = lin_ut[j];
      if (lambda != 0 && j > 0) {
        // Composite trapezoid for int_0^{t_j} S_m(t_j - s) g(s) ds and its
        // time derivative, with the propagator exact at each lag.
        for (int i = 0; i <= j; ++i) {
          const Real wq = (i == 0 || i == j) ? h / 2 : h;
          const PropagatorTable& tl = lag[j - i];
          for (Index k = 0; k < acc_u.size(); ++k) {
            const Complex gi = rhs[i][k];
            acc_u[k] -= wq * (tl.sin_dtw[k] / tl.w[k]) * gi;
            acc_ut[k] -= wq * tl.cos_dtw[k] * gi;
          }
        }
      }
      // The quadrature kernel vanishes at zero lag, so each sweep finalizes
      // one more node exactly; transient blowups (even non-finite ones) in
      // not-yet-final nodes are overwritten by later sweeps.  A non-finite
      // sweep therefore counts as "not converged" rather than fatal.
      const Real node_diff =
          weighted_norm(SpectralField{g, acc_u - u[j]}, norm_u) +
          weighted_norm(SpectralField{g, acc_ut - ut[j]}, norm_ut);
      diff = std::isfinite(node_diff)
                 ? std::max(diff, node_diff)
                 : std::numeric_limits<Real>::infinity();
      next_u[j] = std::move(acc_u);
      next_ut[j] = std::move(acc_ut);
    }
    u = std::move(next_u);
    ut = std::move(next_ut);
    result.iterations = iter;
    result.last_diff = diff;
    if (prev_diff > 0) result.contraction_ratios.push_back(diff / prev_diff);
    if (diff < tol) break;
    prev_diff = diff;
    if (iter == max_iter) {
      const Real ratio = result.contraction_ratios.empty()
                             ? std::numeric_limits<Real>::quiet_NaN()
                             : result.contraction_ratios.back();
      throw ContractionError(
          "picard iteration did not converge in " + std::to_string(max_iter) +
              " iterations (last contraction ratio " + std::to_string(ratio) +
              "); the window is likely too large",
          ratio);
    }
  }

  result.states.reserve(n_nodes);
  for (int j = 0; j < n_nodes; ++j)
    result.states.push_back(State{SpectralField{g, std::move(u[j])},
                                  SpectralField{g, std::move(ut[j])},
                                  st.time + j * h, st.params});
  return result;
}

namespace {

void check_drift(const EnergyReport& e0, const EnergyReport& e, Real bound) {
  const Real scale = std::max(std::abs(e0.total), Real(1e-300));
  const Real drift = std::abs(e.total - e0.total) / scale;
  if (drift > bound)
    throw Error("energy drift " + std::to_string(drift) + " at t = " +
                std::to_string(e.time) + " exceeds the stability bound " +
                std::to_string(bound));
}

}  // namespace

Trajectory integrate(const State& st, Real T, Real dt, Scheme scheme,
                     const IntegrateOptions& options) {
  if (!(dt > 0)) throw ConfigError("dt must be positive");
  if (!(T >= 0)) throw ConfigError("T must be >= 0");

  Trajectory traj;
  traj.states.push_back(st);
  traj.energies.push_back(energy(st));
  const EnergyReport e0 = traj.energies.front();
  if (T == 0) return traj;

  if (scheme == Scheme::PicardChain) {
    State cur = st;
    Real remaining = T;
    while (remaining > 1e-12 * std::max(Real(1), T)) {
      const Real window = std::min(
          local_existence_time(cur, options.picard_sigma, options.picard_c0,
                               options.delta_max),
          remaining);
      PicardResult local = picard_local_solve(
          cur, window, options.picard_steps, options.picard_tol,
          options.picard_max_iter, options.picard_sigma);
      for (std::size_t j = 1; j < local.states.size(); ++j) {
        traj.states.push_back(local.states[j]);
        traj.energies.push_back(energy(local.states[j]));
        check_drift(e0, traj.energies.back(), options.energy_drift_abort);
      }
      cur = traj.states.back();
      remaining -= window;
    }
    return traj;
  }

  // StrangSplit.
  const long long full_steps = static_cast<long long>(
      std::floor(T / dt + 1e-9));
  const Real rem = T - full_steps * dt;
  const bool has_rem = rem > 1e-12 * std::max(Real(1), T);
  const long long n_total = full_steps + (has_rem ? 1 : 0);
  int stride = options.output_stride;
  if (stride <= 0)
    stride = static_cast<int>(std::max<long long>(1, n_total / 1000));

  State cur = st;
  for (long long step = 0; step < n_total; ++step) {
    const Real step_dt = (step < full_steps) ? dt : rem;
    kick(cur, step_dt / 2);
    cur = linear_propagate(cur, step_dt);
    kick(cur, step_dt / 2);
    if ((step + 1) % stride == 0 || step + 1 == n_total) {
      traj.states.push_back(cur);
      traj.energies.push_back(energy(cur));
      check_drift(e0, traj.energies.back(), options.energy_drift_abort);
    }
  }
  return traj;
}

State forced_linear_step(const State& st,
                         const std::function<RealField(Real)>& forcing,
                         Real dt, int quad_nodes) {
  if (quad_nodes < 2) throw ConfigError("quad_nodes must be >= 2");
  const Grid& g = st.u.grid;
  const Real h = dt / (quad_nodes - 1);

  State out = linear_propagate(st, dt);
  for (int j = 0; j < quad_nodes; ++j) {
    const Real s = j * h;
    const Real wq = (j == 0 || j == quad_nodes - 1) ? h / 2 : h;
    const SpectralField fj = forward_transform(forcing(st.time + s));
    const PropagatorTable tl = propagator_table(g, st.params.m, dt - s);
    for (Index k = 0; k < out.u.coeffs.size(); ++k) {
      out.u.coeffs[k] += wq * (tl.sin_dtw[k] / tl.w[k]) * fj.coeffs[k];
      out.ut.coeffs[k] += wq * tl.cos_dtw[k] * fj.coeffs[k];
    }
  }
  return out;
}

}  // namespace nlbeam
