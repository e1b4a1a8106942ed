#pragma once

// Closed-form constants of the dissipativity and perturbation estimates, and
// the comparison-ODE / uniform-Gronwall oracles used to check them.

#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "plap/forcing.hpp"
#include "plap/weights.hpp"

namespace plap {

struct BoundsOptions {
  double t_ref = 0.0;          // time at which β₁ is minimised over η
  std::optional<double> eta;   // fix η instead of optimising
};

class BoundsReport {
 public:
  TheoryParams tp;
  double c_embed = 1.0;  // ‖u‖²_{L²} <= c_embed ‖u‖²_E
  double c_coerc = 1.0;  // ‖u‖_E^p >= c_coerc ‖u‖^p_{L²}, = c_embed^{−p/2}
  double lipschitz = 1.0;
  L1Profile l1;
  double t_ref = 0.0;
  double eta = 0.0;
  double gamma = 0.0;
  double T1 = 0.0;
  double T2 = 0.0;
  double R_window = 0.0;  // = T1
  double a1 = 0.0;

  // γ(η) = c_coerc − (η^θ/θ + η^p/p)
  double gamma_at(double eta_value) const;
  // δ(t) = (1/θ′)(L/η)^{θ′} + (1/p′)(L₁(t)/η)^{p′}
  double delta(double t) const { return delta_at(eta, t); }
  double delta_at(double eta_value, double t) const;
  // β₁(t) = (δ(t)/γ)^{2/p} + 1, bounding ½‖u(t)‖²_{L²} once t − τ >= T1
  double beta1(double t) const;
  // [γ/2 (p − 2)(t − τ)]^{−2/(p−2)}
  double transient(double elapsed) const;
  // (δ(t)/γ)^{2/p} + transient(t − τ)
  double decay_bound(double t, double tau) const;

  double a2(double t) const;
  double a3(double t) const;
  // (a₃(t)/R + a₂(t)) e^{a₁}, bounding ‖u(t)‖_E^p once t − τ >= T2
  double beta2(double t) const;
};

// Throws InvalidArgument for L <= 0 or c_embed < 1, NoFeasibleEta when a
// fixed η leaves γ <= 0.
BoundsReport build_bounds(const TheoryParams& tp, double c_embed, double lipschitz,
                          const L1Profile& l1, const BoundsOptions& opts = {});

inline double beta2_curve(const BoundsReport& br, double t) { return br.beta2(t); }

struct Curve {
  std::vector<double> t;
  std::vector<double> y;
};

// Integrates y′ = 2(δ(t) − γ y^θ) from y(tau) = y0 to tau + horizon with an
// explicit RK4 scheme whose step is limited by the local stiffness. Throws
// NonConvergence on blow-up.
Curve ode_decay_oracle(double gamma, double theta,
                       const std::function<double(double)>& delta, double y0,
                       double tau, double horizon, double max_step = 1e-3);

struct GronwallCheck {
  bool holds = true;
  double bound = 0.0;   // (a₃/R + a₂) e^{a₁}
  double margin = 0.0;  // bound − y(t + R)
};

// Conclusion of the uniform Gronwall lemma against a curve sampled on
// [t, t + R]; the last sample is y(t + R).
GronwallCheck uniform_gronwall_oracle(double a1, double a2, double a3, double R,
                                      const std::vector<double>& y);

// (gap0 + 2M(t − τ)·weight_gap) e^{2L(t − τ)}
double perturbation_envelope(double lipschitz, double M, double t, double tau,
                             double gap0, double weight_gap);
// max(1, 2M(t − τ)) e^{2L(t − τ)}
double perturbation_constant(double lipschitz, double M, double t, double tau);

// A-priori M on [tau + T2, t]: ‖u‖_{L^p} <= ‖u‖_E, so both terms are bounded
// by β₂(t).
double apriori_perturbation_M(const BoundsReport& br, double t);

struct PerturbationConstants {
  double M_measured = 0.0;
  double M_apriori = 0.0;
  double M_tilde = 0.0;
  double window = 0.0;
};

nlohmann::ordered_json bounds_to_json(const BoundsReport& br,
                                      const std::optional<PerturbationConstants>& pert = std::nullopt);

void write_bounds_json(const std::filesystem::path& path, const BoundsReport& br,
                       const std::optional<PerturbationConstants>& pert = std::nullopt);

// Columns t,delta,beta1,beta2,envelope; the envelope column uses (M, weight_gap)
// with gap0 = 0 and τ = ts.front().
void write_bounds_csv(const std::filesystem::path& path, const BoundsReport& br,
                      const std::vector<double>& ts, double M, double weight_gap);

}  // namespace plap
