#include "plap/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>

#include "plap/error.hpp"

namespace plap {

void StepConfig::validate(double lipschitz) const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw Error(ErrorKind::InvalidArgument, "time step dt must be > 0");
  }
  if (!(tol_inner > 0.0 && tol_inner <= 1e-3)) {
    throw Error(ErrorKind::InvalidArgument, "tol_inner must lie in (0, 1e-3]");
  }
  if (max_inner_iters < 1) {
    throw Error(ErrorKind::InvalidArgument, "max_inner_iters must be >= 1");
  }
  if (!(dt * lipschitz < 1.0)) {
    throw Error(ErrorKind::StepRejected,
                "dt * L must be < 1 for the explicit forcing split (dt * L = " +
                    std::to_string(dt * lipschitz) + ")");
  }
}

namespace {

// Objective J(v) = ½‖v − z‖² + dt φ(v) and its L²-gradient v − z + dt A v.
struct ResolventProblem {
  const Energy& e;
  const State& z;
  double dt;

  double value(const State& v) const {
    const double d = kernels::weighted_dist_sq(v.grid().weights(), v.values(), z.values());
    return 0.5 * d + dt * energy(e, v);
  }

  void gradient(const State& v, State& g) const {
    apply_A(e, v, g);
    auto gv = g.values();
    const auto vv = v.values();
    const auto zv = z.values();
    for (std::size_t i = 0; i < gv.size(); ++i) gv[i] = vv[i] - zv[i] + dt * gv[i];
  }
};

constexpr int kNonmonotoneMemory = 8;
constexpr double kArmijo = 1e-4;
constexpr double kStepMin = 1e-12;
constexpr double kStepMax = 1e12;

}  // namespace

ProxResult solve_resolvent(const Energy& e, const State& z, double dt,
                           const State& start, double tol, int max_iters) {
  require_same_grid(z.grid(), e.grid());
  require_same_grid(start.grid(), e.grid());
  const ResolventProblem prob{e, z, dt};
  const auto w = e.grid().weights();
  const double target = tol * (1.0 + norm_l2(z));

  State v = start;
  State g(e.grid());
  prob.gradient(v, g);
  double jv = prob.value(v);
  double gnorm2 = kernels::weighted_dot(w, g.values(), g.values());

  std::deque<double> history{jv};
  State trial(e.grid());
  State g_trial(e.grid());
  double step = 1.0;

  int it = 0;
  for (; std::sqrt(gnorm2) > target; ++it) {
    if (it >= max_iters) {
      throw NonConvergenceError("resolvent solver did not converge in " +
                                    std::to_string(max_iters) + " iterations (residual " +
                                    std::to_string(std::sqrt(gnorm2)) + ")",
                                std::sqrt(gnorm2), it);
    }
    const double jref = *std::max_element(history.begin(), history.end());
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::fabs(jref);
    double lambda = step;
    double jt = 0.0;
    for (int bt = 0;; ++bt) {
      trial = v;
      trial.axpy(-lambda, g);
      jt = prob.value(trial);
      if (jt <= jref - kArmijo * lambda * gnorm2 + slack || bt >= 40) break;
      lambda *= 0.5;
    }
    prob.gradient(trial, g_trial);

    // BB1 step from s = trial − v, y = g_trial − g.
    double ss = 0.0, sy = 0.0;
    const auto tv = trial.values();
    const auto vv = v.values();
    const auto gt = g_trial.values();
    const auto gv = g.values();
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double s = tv[i] - vv[i];
      const double y = gt[i] - gv[i];
      ss += w[i] * s * s;
      sy += w[i] * s * y;
    }
    step = sy > 0.0 ? std::clamp(ss / sy, kStepMin, kStepMax) : kStepMax;

    std::swap(v, trial);
    std::swap(g, g_trial);
    jv = jt;
    gnorm2 = kernels::weighted_dot(w, g.values(), g.values());
    history.push_back(jv);
    if (history.size() > kNonmonotoneMemory) history.pop_front();
  }
  return {std::move(v), std::sqrt(gnorm2), it};
}

ProxResult prox_step(const Energy& e, const Forcing& f, const State& u, double t,
                     const StepConfig& cfg) {
  cfg.validate(f.lipschitz());
  State z = f.eval(t, u);
  z *= cfg.dt;
  z += u;
  return solve_resolvent(e, z, cfg.dt, u, cfg.tol_inner, cfg.max_inner_iters);
}

Monitor measure(const Energy& e, const State& u) {
  Monitor m;
  m.l2_norm = norm_l2(u);
  const double epow = norm_E_pow(u, e.weight, e.p());
  m.e_norm = std::pow(epow, 1.0 / e.p());
  m.energy = epow / e.p();
  return m;
}

double step_time(double tau, std::size_t k, double dt) noexcept {
  const double k0 = std::nearbyint(tau / dt);
  if (std::fabs(tau - k0 * dt) <= 1e-9 * dt) return (k0 + static_cast<double>(k)) * dt;
  return tau + static_cast<double>(k) * dt;
}

Trajectory evolve(const Energy& e, const Forcing& f, const State& u_tau, double tau,
                  double t_end, const StepConfig& cfg, bool keep_states) {
  if (!(t_end >= tau)) {
    throw Error(ErrorKind::InvalidArgument, "evolve needs t_end >= tau");
  }
  cfg.validate(f.lipschitz());
  require_same_grid(u_tau.grid(), e.grid());

  const double span = (t_end - tau) / cfg.dt;
  const auto n_steps = static_cast<std::size_t>(std::max(0.0, std::ceil(span - 1e-9)));

  Trajectory traj;
  traj.times.reserve(n_steps + 1);
  traj.monitors.reserve(n_steps + 1);
  if (keep_states) traj.states.reserve(n_steps + 1);

  State u = u_tau;
  u.set_time_tag(step_time(tau, 0, cfg.dt));
  traj.times.push_back(step_time(tau, 0, cfg.dt));
  traj.monitors.push_back(measure(e, u));
  if (keep_states) traj.states.push_back(u);

  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = step_time(tau, k, cfg.dt);
    ProxResult r = prox_step(e, f, u, t, cfg);
    u = std::move(r.state);
    const double t_next = step_time(tau, k + 1, cfg.dt);
    u.set_time_tag(t_next);
    Monitor mon = measure(e, u);
    mon.inner_residual = r.residual;
    mon.inner_iters = r.iterations;
    traj.times.push_back(t_next);
    traj.monitors.push_back(mon);
    if (keep_states) traj.states.push_back(u);
  }
  traj.last = std::move(u);
  return traj;
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  std::fprintf(out, "step,time,l2_norm,E_norm,energy,inner_residual,inner_iters\n");
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Monitor& m = traj.monitors[k];
    std::fprintf(out, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", k, traj.times[k],
                 m.l2_norm, m.e_norm, m.energy, m.inner_residual, m.inner_iters);
  }
  std::fclose(out);
}

}  // namespace plap
