#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "plap/grid.hpp"

namespace plap {

using Rng = std::mt19937_64;

// Smooth random directions: Gaussian combinations of the first `modes`
// tensor sine modes on the sub-box [−support, support]^d (snapped to nodes),
// normalised to unit L². Uniform on the unit sphere of that subspace.
struct DirectionOptions {
  int modes = 8;
  double support_fraction = 0.5;  // support = fraction · R_dom
};

State random_direction(const Grid& grid, Rng& rng, const DirectionOptions& opts = {});

// Direction times a radius drawn uniformly from [0, rho].
State random_ball_sample(const Grid& grid, Rng& rng, double rho,
                         const DirectionOptions& opts = {});

// `count` ball samples from a generator seeded with `seed`.
std::vector<State> sample_ball(const Grid& grid, double rho, int count, std::uint64_t seed,
                               const DirectionOptions& opts = {});

// Independent N(0, sigma²) values on interior nodes; rough test data.
State random_noise(const Grid& grid, Rng& rng, double sigma = 1.0);

}  // namespace plap
