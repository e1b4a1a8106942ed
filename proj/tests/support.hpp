#pragma once

#include <cmath>
#include <random>

#include "plap/attractor.hpp"
#include "plap/bounds.hpp"
#include "plap/operators.hpp"

namespace support {

inline plap::Grid desk_grid() { return plap::make_grid(1, 8.0, 257); }

inline plap::TheoryParams desk_theory(double p = 4.0) { return plap::TheoryParams::make(p, 5); }

inline plap::WeightFamily desk_family() {
  return {plap::WeightBase::Polynomial, 6.0, plap::WeightShift::Constant};
}

inline plap::Energy desk_energy(const plap::Grid& g, double eps = 0.0, double p = 4.0) {
  return {plap::make_weight(g, desk_family(), eps), desk_theory(p)};
}

inline plap::Forcing desk_forcing(const plap::Grid& g) {
  plap::L1Profile l1{plap::L1Profile::Kind::Ramp, 1.0, 0.1, -10.0, 10.0};
  return plap::Forcing(g, 1.0, l1, plap::Coupling{plap::Coupling::Kind::Sin, -1.0});
}

inline plap::Forcing zero_forcing(const plap::Grid& g) {
  plap::L1Profile l1{plap::L1Profile::Kind::Constant, 0.0, 0.0, 0.0, 10.0};
  return plap::Forcing(g, 1.0, l1, plap::Coupling{plap::Coupling::Kind::None, -1.0});
}

// Alternates smooth and rough interior data with log-uniform amplitude.
inline plap::State random_state(const plap::Grid& g, plap::Rng& rng, double lo = 1e-2,
                                double hi = 1e1) {
  std::uniform_real_distribution<double> logamp(std::log(lo), std::log(hi));
  std::bernoulli_distribution rough(0.5);
  plap::State s = rough(rng) ? plap::random_noise(g, rng) : plap::random_direction(g, rng);
  s *= std::exp(logamp(rng)) / plap::norm_l2(s);
  return s;
}

inline double rel_err(double a, double b) {
  return std::fabs(a - b) / std::max(std::fabs(b), 1e-300);
}

}  // namespace support
