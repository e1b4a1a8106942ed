#pragma once

// Data-parallel inner loops.
//
// Every kernel comes in two flavours: `reference::` is a plain serial loop
// kept for testing, and the unqualified version is OpenMP-parallel. The
// parallel reductions split the index range into fixed-size blocks that do
// not depend on the thread count, reduce each block serially, then add the
// block partials in block order. Results are therefore bit-identical for any
// number of threads, and agree with the reference to rounding.

#include <cmath>
#include <cstddef>
#include <span>

namespace plap::kernels {

inline constexpr std::size_t kBlock = 512;
// Below this many items the parallel region is not worth entering. The
// blocked summation order is the same either way.
inline constexpr std::size_t kParallelThreshold = 4096;

// Lattice geometry as seen by the stencil kernels. `node_weight` holds the
// tensor trapezoid weights; the face between node i and its +axis neighbour
// carries weight h * prod_{j != axis} w1(i_j), which equals node_weight[i]
// doubled when i sits on the lower boundary of that axis.
struct StencilView {
  int dim = 1;
  std::size_t m = 0;
  double h = 0.0;
  std::span<const double> node_weight;
};

// |s|^{p-2} s, taken as 0 at s = 0.
inline double spow(double s, double p) noexcept {
  if (s == 0.0) return 0.0;
  const double mag = std::fabs(s);
  if (p == 4.0) return mag * mag * s;
  if (p == 3.0) return mag * s;
  return std::pow(mag, p - 2.0) * s;
}

inline double apow(double s, double p) noexcept {
  const double mag = std::fabs(s);
  if (p == 4.0) return (mag * mag) * (mag * mag);
  if (p == 2.0) return mag * mag;
  return std::pow(mag, p);
}

// Σ w_i u_i v_i
double weighted_dot(std::span<const double> w, std::span<const double> u,
                    std::span<const double> v);
// Σ w_i |u_i|^p
double weighted_pow_sum(std::span<const double> w, std::span<const double> u,
                        double p);
// Σ w_i a_i |u_i|^p
double weighted_pow_sum(std::span<const double> w, std::span<const double> a,
                        std::span<const double> u, double p);
// Σ_faces w_f |D u|_f^p
double face_pow_sum(const StencilView& s, std::span<const double> u, double p);
// out = −div_h(|D u|^{p−2} D u) + a |u|^{p−2} u on interior nodes, 0 on the
// boundary.
void apply_operator(const StencilView& s, std::span<const double> a,
                    std::span<const double> u, double p, std::span<double> out);
// Squared L² distance Σ w_i (u_i − v_i)².
double weighted_dist_sq(std::span<const double> w, std::span<const double> u,
                        std::span<const double> v);
// max_a min_b sqrt(weighted_dist_sq(a, b)); parallel over members of `from`.
double max_min_distance(std::span<const double> w,
                        std::span<const std::span<const double>> from,
                        std::span<const std::span<const double>> to);

namespace reference {
double weighted_dot(std::span<const double> w, std::span<const double> u,
                    std::span<const double> v);
double weighted_pow_sum(std::span<const double> w, std::span<const double> u,
                        double p);
double weighted_pow_sum(std::span<const double> w, std::span<const double> a,
                        std::span<const double> u, double p);
double face_pow_sum(const StencilView& s, std::span<const double> u, double p);
void apply_operator(const StencilView& s, std::span<const double> a,
                    std::span<const double> u, double p, std::span<double> out);
double weighted_dist_sq(std::span<const double> w, std::span<const double> u,
                        std::span<const double> v);
double max_min_distance(std::span<const double> w,
                        std::span<const std::span<const double>> from,
                        std::span<const std::span<const double>> to);
}  // namespace reference

}  // namespace plap::kernels
