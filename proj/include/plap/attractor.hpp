#pragma once

// Finite-cloud approximations of pullback attractor sections, the Hausdorff
// semi-distance between them, and the ε-sweep used to observe
// upper-semicontinuity at ε = 0.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "plap/sampling.hpp"
#include "plap/stepper.hpp"

namespace plap {

struct Provenance {
  double eps = 0.0;
  double depth = 0.0;
  std::uint64_t seed = 0;
};

struct Cloud {
  std::vector<State> states;
  double time_tag = 0.0;
  Provenance provenance;

  // Throws EmptyCloud / GridMismatch / InvalidArgument (non-finite member).
  void validate() const;
  const Grid& grid() const { return states.front().grid(); }
};

// sup_{a ∈ A} inf_{b ∈ B} ‖a − b‖_{L²}; not symmetric.
double hausdorff_semidist(const Cloud& a, const Cloud& b);
double hausdorff_semidist(const std::vector<State>& a, const std::vector<State>& b);

struct PullbackConfig {
  double rho0 = 10.0;
  int m_samples = 8;
  std::vector<double> depths;  // strictly increasing pullback offsets
  double tol = 1e-4;
  std::uint64_t seed = 1;
  DirectionOptions directions;

  // depths = {Δτ, 2Δτ, …, count·Δτ}
  static std::vector<double> linear_schedule(double delta_tau, int count);
  void validate() const;
};

// Members are evolved concurrently; the result does not depend on the
// thread count.
std::vector<State> evolve_ensemble(const Energy& e, const Forcing& f,
                                   const std::vector<State>& initial, double tau, double t,
                                   const StepConfig& step);

struct PullbackResult {
  Cloud cloud;                        // deepest cloud computed
  std::vector<double> depths_used;
  std::vector<double> certificates;   // dist_H(cloud_k, cloud_{k+1})
  bool converged = false;
};

// Samples the L² ball of radius rho0 once (seeded), pushes the samples
// forward from t − depth_k to t for each depth in turn, and stops as soon as
// two successive clouds are within tol.
PullbackResult pullback_section(const Energy& e, const Forcing& f, double t,
                                const PullbackConfig& cfg, const StepConfig& step);

// k ↦ dist_H(S(t, t − depth_k) B0, attractor).
std::vector<double> attraction_diagnostic(const Energy& e, const Forcing& f, double t,
                                          const std::vector<State>& b0,
                                          const std::vector<double>& depths,
                                          const StepConfig& step, const Cloud& attractor);

struct InvarianceReport {
  double forward = 0.0;   // dist_H(S(t, τ) Â(τ), Â(t))
  double backward = 0.0;  // dist_H(Â(t), S(t, τ) Â(τ))
};

InvarianceReport invariance_diagnostic(const Energy& e, const Forcing& f,
                                       const Cloud& section_tau, const Cloud& section_t,
                                       const StepConfig& step);

struct GapCurve {
  std::vector<double> times;
  std::vector<double> gap_sq;    // ‖u^ε(s) − u^0(s)‖²
  std::vector<double> envelope;  // perturbation envelope with measured M
  double M_measured = 0.0;       // sup_s ‖u⁰‖_p^p + ‖u⁰‖_p^{p−1}‖u^ε‖_p
  double weight_gap = 0.0;       // lattice ‖a_ε − a₀‖_∞
  double gap0 = 0.0;

  double sup_gap_sq() const;
};

// Paired stepping of the ε and ε = 0 problems on [tau, t] with one dt grid.
GapCurve process_gap(const Energy& e_eps, const Energy& e_0, const Forcing& f,
                     const State& u_tau_eps, const State& u_tau_0, double tau, double t,
                     const StepConfig& step);

struct SweepRow {
  double eps = 0.0;
  double dist_to_a0 = 0.0;
  double sup_gap_sq = 0.0;
  double envelope = 0.0;
  double depth_used = 0.0;
  bool converged = false;
};

struct SweepConfig {
  std::vector<double> eps_list;  // decreasing, in (0, 1]
  double t = 0.0;
  double window = 10.0;          // compact window [t − window, t] for the gap runs
  PullbackConfig pullback;
  StepConfig step;
};

// Rows for ε = 0 followed by eps_list, sorted by decreasing ε. Every section
// uses the same seed.
std::vector<SweepRow> usc_sweep(const Grid& grid, const WeightFamily& family,
                                const TheoryParams& tp, const Forcing& f,
                                const SweepConfig& cfg);

// Columns eps,dist_H_to_A0,sup_gap_sq,envelope,depth_used,converged_flag.
void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

// Directory of state_###.txt snapshots plus manifest.json.
void write_cloud(const std::filesystem::path& dir, const Cloud& cloud);
Cloud read_cloud(const std::filesystem::path& dir);

}  // namespace plap
