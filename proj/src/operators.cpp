#include "plap/operators.hpp"

#include <cmath>

#include "plap/error.hpp"

namespace plap {

double energy(const Energy& e, const State& u) {
  return norm_E_pow(u, e.weight, e.p()) / e.p();
}

void apply_A(const Energy& e, const State& u, State& out) {
  require_same_grid(u.grid(), e.grid());
  require_same_grid(out.grid(), e.grid());
  kernels::apply_operator(e.grid().stencil(), e.weight.values(), u.values(), e.p(),
                          out.values());
}

State apply_A(const Energy& e, const State& u) {
  State out(e.grid());
  apply_A(e, u, out);
  return out;
}

double monotonicity_gap(const Energy& e, const State& u, const State& v) {
  require_same_grid(u.grid(), v.grid());
  State diff_op = apply_A(e, u);
  diff_op -= apply_A(e, v);
  return inner_l2(diff_op, u - v);
}

double tartar_lower_bound(const Energy& e, const State& u, const State& v) {
  return std::pow(2.0, 2.0 - e.p()) * norm_E_pow(u - v, e.weight, e.p());
}

TartarPair tartar_pointwise(std::span<const double> x, std::span<const double> y,
                            double p) {
  if (x.size() != y.size()) {
    throw Error(ErrorKind::InvalidArgument, "tartar_pointwise: vector length mismatch");
  }
  if (!(p > 2.0)) throw Error(ErrorKind::InvalidArgument, "tartar_pointwise needs p > 2");
  double nx2 = 0.0, ny2 = 0.0, nd2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    nx2 += x[i] * x[i];
    ny2 += y[i] * y[i];
    nd2 += (x[i] - y[i]) * (x[i] - y[i]);
  }
  const double sx = nx2 > 0.0 ? std::pow(nx2, 0.5 * (p - 2.0)) : 0.0;
  const double sy = ny2 > 0.0 ? std::pow(ny2, 0.5 * (p - 2.0)) : 0.0;
  double lhs = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lhs += (sx * x[i] - sy * y[i]) * (x[i] - y[i]);
  }
  return {lhs, std::pow(2.0, 2.0 - p) * std::pow(nd2, 0.5 * p)};
}

}  // namespace plap
