#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "plap/forcing.hpp"
#include "plap/operators.hpp"

namespace plap {

struct StepConfig {
  double dt = 1e-2;
  double tol_inner = 1e-8;
  int max_inner_iters = 20000;

  // Throws InvalidArgument for dt <= 0 or tol outside (0, 1e-3], and
  // StepRejected when dt * L >= 1.
  void validate(double lipschitz) const;
};

// Time of step k from tau. When tau lies on the global dt lattice the result
// is (round(tau/dt) + k)·dt, so runs restarted from an intermediate time see
// exactly the same step times.
double step_time(double tau, std::size_t k, double dt) noexcept;

struct ProxResult {
  State state;
  double residual = 0.0;  // ‖v + dt A v − z‖_{L²} at return
  int iterations = 0;
};

// argmin_v ½‖v − z‖² + dt φ(v), i.e. v + dt A v = z, by Barzilai–Borwein
// gradient descent with a nonmonotone Armijo safeguard, warm-started at
// `start`. Stops once the residual is <= tol (1 + ‖z‖). Throws
// NonConvergenceError after `max_iters` iterations.
ProxResult solve_resolvent(const Energy& e, const State& z, double dt,
                           const State& start, double tol, int max_iters);

// One implicit step of u' + A u = B(t, u) with B taken explicitly:
// z = u + dt B(t, u), then the resolvent above warm-started at u.
ProxResult prox_step(const Energy& e, const Forcing& f, const State& u, double t,
                     const StepConfig& cfg);

struct Monitor {
  double l2_norm = 0.0;
  double e_norm = 0.0;
  double energy = 0.0;
  double inner_residual = 0.0;
  int inner_iters = 0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<State> states;  // empty unless kept
  std::vector<Monitor> monitors;

  std::optional<State> last;

  const State& final_state() const { return *last; }
  double final_time() const { return times.back(); }
};

// Uniform steps from tau; t_end − tau is rounded up to whole steps and the
// reported final time is tau + n·dt.
Trajectory evolve(const Energy& e, const Forcing& f, const State& u_tau, double tau,
                  double t_end, const StepConfig& cfg, bool keep_states = true);

Monitor measure(const Energy& e, const State& u);

// Columns: step,time,l2_norm,E_norm,energy,inner_residual,inner_iters.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);

}  // namespace plap
