#pragma once

#include <span>
#include <utility>

#include "plap/grid.hpp"
#include "plap/weights.hpp"

namespace plap {

// φ(u) = (1/p)‖u‖_E^p together with the data it depends on.
struct Energy {
  WeightField weight;
  TheoryParams tp;

  const Grid& grid() const noexcept { return weight.grid(); }
  double p() const noexcept { return tp.p; }
};

double energy(const Energy& e, const State& u);

// Discrete A_ε u. For every v vanishing on the boundary,
// inner_l2(apply_A(u), v) equals the face/node duality pairing, so A is the
// exact L²-gradient of `energy`.
State apply_A(const Energy& e, const State& u);
void apply_A(const Energy& e, const State& u, State& out);

// inner_l2(A u − A v, u − v) >= 0
double monotonicity_gap(const Energy& e, const State& u, const State& v);

// 2^{2−p} ‖u − v‖_E^p, the lower bound the gap must dominate.
double tartar_lower_bound(const Energy& e, const State& u, const State& v);

// Pointwise form on vectors of any length:
//   lhs = (|x|^{p−2}x − |y|^{p−2}y)·(x − y),  rhs = 2^{2−p}|x − y|^p.
struct TartarPair {
  double lhs = 0.0;
  double rhs = 0.0;
};
TartarPair tartar_pointwise(std::span<const double> x, std::span<const double> y,
                            double p);

}  // namespace plap
