#include "plap/kernels.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace plap::kernels {

namespace {

inline bool on_boundary(std::size_t idx, int dim, std::size_t m) {
  for (int k = 0; k < dim; ++k) {
    const std::size_t ik = idx % m;
    if (ik == 0 || ik == m - 1) return true;
    idx /= m;
  }
  return false;
}

// Sum f(i) over [0, n) in fixed blocks. The block partials are combined in
// order, so the result does not depend on whether the blocks ran in parallel.
template <typename F>
double blocked_sum(std::size_t n, F&& f, bool allow_parallel = true) {
  const std::size_t nblocks = (n + kBlock - 1) / kBlock;
  if (nblocks <= 1) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += f(i);
    return acc;
  }
  std::vector<double> partial(nblocks, 0.0);
  const bool par = allow_parallel && n >= kParallelThreshold;
  const auto nb = static_cast<std::ptrdiff_t>(nblocks);
#pragma omp parallel for schedule(static) if (par)
  for (std::ptrdiff_t b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double acc = 0.0;
    for (std::size_t i = lo; i < hi; ++i) acc += f(i);
    partial[static_cast<std::size_t>(b)] = acc;
  }
  double total = 0.0;
  for (double v : partial) total += v;
  return total;
}

// Contribution of all +axis faces attached to node idx.
inline double node_faces_pow(const StencilView& s, std::span<const double> u,
                             double p, std::size_t idx) {
  double acc = 0.0;
  std::size_t stride = 1;
  std::size_t rest = idx;
  for (int k = 0; k < s.dim; ++k) {
    const std::size_t ik = rest % s.m;
    rest /= s.m;
    if (ik + 1 < s.m) {
      const double g = (u[idx + stride] - u[idx]) / s.h;
      const double wf = s.node_weight[idx] * (ik == 0 ? 2.0 : 1.0);
      acc += wf * apow(g, p);
    }
    stride *= s.m;
  }
  return acc;
}

inline double node_operator(const StencilView& s, std::span<const double> a,
                            std::span<const double> u, double p,
                            std::size_t idx) {
  if (on_boundary(idx, s.dim, s.m)) return 0.0;
  double div = 0.0;
  std::size_t stride = 1;
  for (int k = 0; k < s.dim; ++k) {
    const double gl = (u[idx] - u[idx - stride]) / s.h;
    const double gr = (u[idx + stride] - u[idx]) / s.h;
    div += (spow(gl, p) - spow(gr, p)) / s.h;
    stride *= s.m;
  }
  return div + a[idx] * spow(u[idx], p);
}

inline double dist_sq_serial(std::span<const double> w,
                             std::span<const double> u,
                             std::span<const double> v) {
  return blocked_sum(
      w.size(),
      [&](std::size_t i) {
        const double d = u[i] - v[i];
        return w[i] * d * d;
      },
      false);
}

}  // namespace

double weighted_dot(std::span<const double> w, std::span<const double> u,
                    std::span<const double> v) {
  return blocked_sum(w.size(), [&](std::size_t i) { return w[i] * u[i] * v[i]; });
}

double weighted_pow_sum(std::span<const double> w, std::span<const double> u,
                        double p) {
  return blocked_sum(w.size(),
                     [&](std::size_t i) { return w[i] * apow(u[i], p); });
}

double weighted_pow_sum(std::span<const double> w, std::span<const double> a,
                        std::span<const double> u, double p) {
  return blocked_sum(w.size(),
                     [&](std::size_t i) { return w[i] * a[i] * apow(u[i], p); });
}

double face_pow_sum(const StencilView& s, std::span<const double> u, double p) {
  return blocked_sum(s.node_weight.size(), [&](std::size_t i) {
    return node_faces_pow(s, u, p, i);
  });
}

void apply_operator(const StencilView& s, std::span<const double> a,
                    std::span<const double> u, double p,
                    std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
#pragma omp parallel for schedule(static) if (u.size() >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[static_cast<std::size_t>(i)] =
        node_operator(s, a, u, p, static_cast<std::size_t>(i));
  }
}

double weighted_dist_sq(std::span<const double> w, std::span<const double> u,
                        std::span<const double> v) {
  return blocked_sum(w.size(), [&](std::size_t i) {
    const double d = u[i] - v[i];
    return w[i] * d * d;
  });
}

double max_min_distance(std::span<const double> w,
                        std::span<const std::span<const double>> from,
                        std::span<const std::span<const double>> to) {
  const auto na = static_cast<std::ptrdiff_t>(from.size());
  std::vector<double> nearest(from.size(), 0.0);
  // One pair costs a full pass over the lattice, so parallelise as soon as
  // there is more than one member.
#pragma omp parallel for schedule(dynamic, 1) if (na > 1)
  for (std::ptrdiff_t a = 0; a < na; ++a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : to) {
      best = std::min(best, dist_sq_serial(w, from[static_cast<std::size_t>(a)], b));
    }
    nearest[static_cast<std::size_t>(a)] = best;
  }
  double worst = 0.0;
  for (double d : nearest) worst = std::max(worst, d);
  return std::sqrt(worst);
}

namespace reference {

double weighted_dot(std::span<const double> w, std::span<const double> u,
                    std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * u[i] * v[i];
  return acc;
}

double weighted_pow_sum(std::span<const double> w, std::span<const double> u,
                        double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * std::pow(std::fabs(u[i]), p);
  return acc;
}

double weighted_pow_sum(std::span<const double> w, std::span<const double> a,
                        std::span<const double> u, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    acc += w[i] * a[i] * std::pow(std::fabs(u[i]), p);
  }
  return acc;
}

double face_pow_sum(const StencilView& s, std::span<const double> u, double p) {
  // Axis by axis over an explicit multi-index, independent of the node-major
  // traversal used by the parallel kernel.
  const std::size_t n = u.size();
  double acc = 0.0;
  std::size_t stride = 1;
  for (int k = 0; k < s.dim; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t ik = (i / stride) % s.m;
      if (ik + 1 >= s.m) continue;
      double wf = s.h;
      std::size_t rest = i;
      for (int j = 0; j < s.dim; ++j) {
        const std::size_t ij = rest % s.m;
        rest /= s.m;
        if (j == k) continue;
        wf *= (ij == 0 || ij == s.m - 1) ? 0.5 * s.h : s.h;
      }
      const double g = (u[i + stride] - u[i]) / s.h;
      acc += wf * std::pow(std::fabs(g), p);
    }
    stride *= s.m;
  }
  return acc;
}

void apply_operator(const StencilView& s, std::span<const double> a,
                    std::span<const double> u, double p,
                    std::span<double> out) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (on_boundary(i, s.dim, s.m)) {
      out[i] = 0.0;
      continue;
    }
    double div = 0.0;
    std::size_t stride = 1;
    for (int k = 0; k < s.dim; ++k) {
      const double gl = (u[i] - u[i - stride]) / s.h;
      const double gr = (u[i + stride] - u[i]) / s.h;
      const double fl = gl == 0.0 ? 0.0 : std::pow(std::fabs(gl), p - 2.0) * gl;
      const double fr = gr == 0.0 ? 0.0 : std::pow(std::fabs(gr), p - 2.0) * gr;
      div += (fl - fr) / s.h;
      stride *= s.m;
    }
    const double ui = u[i];
    out[i] = div + a[i] * (ui == 0.0 ? 0.0 : std::pow(std::fabs(ui), p - 2.0) * ui);
  }
}

double weighted_dist_sq(std::span<const double> w, std::span<const double> u,
                        std::span<const double> v) {
  double acc = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = u[i] - v[i];
    acc += w[i] * d * d;
  }
  return acc;
}

double max_min_distance(std::span<const double> w,
                        std::span<const std::span<const double>> from,
                        std::span<const std::span<const double>> to) {
  double worst = 0.0;
  for (const auto& a : from) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : to) best = std::min(best, weighted_dist_sq(w, a, b));
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

}  // namespace reference

}  // namespace plap::kernels
