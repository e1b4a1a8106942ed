#include "plap/sampling.hpp"

#include <cmath>
#include <numbers>

#include "plap/error.hpp"

namespace plap {

State random_direction(const Grid& grid, Rng& rng, const DirectionOptions& opts) {
  if (opts.modes < 1) throw Error(ErrorKind::InvalidArgument, "direction needs >= 1 mode");
  const double h = grid.spacing();
  const double R = grid.half_width();
  // Sub-box edge snapped to a node, at least one interval in from the boundary.
  const double steps = std::max(1.0, std::round(opts.support_fraction * R / h));
  const double half = std::min(steps * h, R - h);
  if (!(half > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid too coarse for sampling");

  const int dim = grid.dim();
  const int K = opts.modes;
  int n_modes = 1;
  for (int k = 0; k < dim; ++k) n_modes *= K;

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> coeff(static_cast<std::size_t>(n_modes));
  for (double& c : coeff) c = normal(rng);

  State s(grid);
  std::vector<double> mode_1d(static_cast<std::size_t>(dim * K));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid.is_boundary(i)) continue;
    const auto x = grid.position(i);
    bool inside = true;
    for (int k = 0; k < dim; ++k) inside = inside && std::fabs(x[static_cast<std::size_t>(k)]) < half;
    if (!inside) continue;
    for (int k = 0; k < dim; ++k) {
      const double xi = (x[static_cast<std::size_t>(k)] + half) / (2.0 * half);
      for (int j = 0; j < K; ++j) {
        mode_1d[static_cast<std::size_t>(k * K + j)] = std::sin((j + 1) * std::numbers::pi * xi);
      }
    }
    double v = 0.0;
    for (int idx = 0; idx < n_modes; ++idx) {
      double prod = coeff[static_cast<std::size_t>(idx)];
      int rest = idx;
      for (int k = 0; k < dim; ++k) {
        prod *= mode_1d[static_cast<std::size_t>(k * K + rest % K)];
        rest /= K;
      }
      v += prod;
    }
    s[i] = v;
  }
  const double n = norm_l2(s);
  s *= 1.0 / n;
  return s;
}

State random_ball_sample(const Grid& grid, Rng& rng, double rho, const DirectionOptions& opts) {
  State s = random_direction(grid, rng, opts);
  std::uniform_real_distribution<double> radius(0.0, rho);
  s *= radius(rng);
  return s;
}

std::vector<State> sample_ball(const Grid& grid, double rho, int count, std::uint64_t seed,
                               const DirectionOptions& opts) {
  Rng rng(seed);
  std::vector<State> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(random_ball_sample(grid, rng, rho, opts));
  return out;
}

State random_noise(const Grid& grid, Rng& rng, double sigma) {
  std::normal_distribution<double> normal(0.0, sigma);
  State s(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!grid.is_boundary(i)) s[i] = normal(rng);
  }
  return s;
}

}  // namespace plap
