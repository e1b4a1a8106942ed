#pragma once

#include <string>

#include "plap/grid.hpp"

namespace plap {

// L₁(t) = ‖B(t, 0)‖_{L²}; every family is nondecreasing and bounded on
// compacts as long as b0, b1 >= 0.
struct L1Profile {
  enum class Kind { Constant, Ramp, Exponential };
  Kind kind = Kind::Constant;
  double b0 = 1.0;
  double b1 = 0.0;
  double t0 = 0.0;     // ramp onset
  double t_cap = 10.0; // exponential growth stops here

  double operator()(double t) const noexcept;
};

std::string to_string(L1Profile::Kind k);
L1Profile::Kind parse_l1_kind(const std::string& s);

// Nodewise saturating coupling c(u) = sign · L · s(u) with s ∈ {sin, tanh},
// globally Lipschitz with constant L.
struct Coupling {
  enum class Kind { None, Sin, Tanh };
  Kind kind = Kind::Sin;
  double sign = -1.0;
};

std::string to_string(Coupling::Kind k);
Coupling::Kind parse_coupling_kind(const std::string& s);

// B(t, u) = L₁(t) φ̂ + c(u), with φ̂ a unit-L² Gaussian bump.
class Forcing {
 public:
  // Throws InvalidArgument for L <= 0, negative b0/b1, or a sign outside {±1}.
  Forcing(const Grid& grid, double lipschitz, L1Profile l1, Coupling coupling,
          double profile_width = 1.0);

  double lipschitz() const noexcept { return lipschitz_; }
  const L1Profile& l1() const noexcept { return l1_; }
  const Coupling& coupling() const noexcept { return coupling_; }
  const State& profile() const noexcept { return profile_; }
  double profile_width() const noexcept { return profile_width_; }

  double l1_profile(double t) const noexcept { return l1_(t); }

  State eval(double t, const State& u) const;
  // out = B(t, u); `out` must live on the forcing's grid.
  void eval(double t, const State& u, State& out) const;

 private:
  double lipschitz_;
  L1Profile l1_;
  Coupling coupling_;
  double profile_width_;
  State profile_;
};

inline State eval_B(const Forcing& f, double t, const State& u) { return f.eval(t, u); }
inline double l1_profile(const Forcing& f, double t) { return f.l1_profile(t); }

}  // namespace plap
