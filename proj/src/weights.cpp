#include "plap/weights.hpp"

#include <algorithm>
#include <cmath>

#include "plap/error.hpp"

namespace plap {

TheoryParams TheoryParams::make(double p, int n_theory) {
  if (!(p > 2.0) || !std::isfinite(p)) {
    throw Error(ErrorKind::InvalidArgument, "exponent p must satisfy p > 2");
  }
  TheoryParams tp;
  tp.p = p;
  tp.n_theory = n_theory;
  tp.theta = p / 2.0;
  tp.theta_conj = p / (p - 2.0);
  tp.p_conj = p / (p - 1.0);
  if (static_cast<double>(n_theory) > p) {
    tp.p_star = p * n_theory / (n_theory - p);
  }
  return tp;
}

double WeightFamily::base_value(double r) const noexcept {
  if (base == WeightBase::Constant) return 1.0;
  return 1.0 + std::pow(r, q);
}

double WeightFamily::shift_value(double r) const noexcept {
  switch (shift) {
    case WeightShift::None: return 0.0;
    case WeightShift::Constant: return 1.0;
    case WeightShift::Bump: return std::exp(-r * r);
  }
  return 0.0;
}

double WeightFamily::shift_sup() const noexcept {
  return shift == WeightShift::None ? 0.0 : 1.0;
}

double default_growth_exponent(const TheoryParams& tp) {
  return std::ceil((tp.n_theory + 1) * (tp.p - 2.0) / 2.0 - 1e-12);
}

std::string to_string(WeightBase b) {
  return b == WeightBase::Constant ? "constant" : "polynomial";
}

std::string to_string(WeightShift s) {
  switch (s) {
    case WeightShift::None: return "none";
    case WeightShift::Constant: return "constant";
    case WeightShift::Bump: return "bump";
  }
  return "none";
}

WeightBase parse_weight_base(const std::string& s) {
  if (s == "constant") return WeightBase::Constant;
  if (s == "polynomial") return WeightBase::Polynomial;
  throw Error(ErrorKind::Parse, "unknown weight base '" + s + "'");
}

WeightShift parse_weight_shift(const std::string& s) {
  if (s == "none") return WeightShift::None;
  if (s == "constant") return WeightShift::Constant;
  if (s == "bump") return WeightShift::Bump;
  throw Error(ErrorKind::Parse, "unknown weight shift '" + s + "'");
}

WeightField::WeightField(Grid grid, std::vector<double> values, WeightFamily family,
                         double eps)
    : grid_(std::move(grid)), values_(std::move(values)), family_(family), eps_(eps) {}

double WeightField::min_value() const noexcept {
  return *std::min_element(values_.begin(), values_.end());
}

WeightField make_weight(const Grid& grid, const WeightFamily& family, double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "weight perturbation eps must lie in [0, 1]");
  }
  if (family.base == WeightBase::Polynomial && !(family.q >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "weight growth exponent q must be >= 0");
  }
  std::vector<double> a(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid.radius(i);
    a[i] = family.base_value(r) + eps * family.shift_value(r);
  }
  return WeightField(grid, std::move(a), family, eps);
}

double sup_distance(const WeightField& a, const WeightField& b) {
  require_same_grid(a.grid(), b.grid());
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    d = std::max(d, std::fabs(a.values()[i] - b.values()[i]));
  }
  return d;
}

namespace {

double decay_integrand(double a, double power) {
  // a^{-power}; p = 4 gives power 1.
  return power == 1.0 ? 1.0 / a : std::pow(a, -power);
}

}  // namespace

Integrability integrability(const WeightField& w, const TheoryParams& tp) {
  const double power = tp.decay_power();
  const auto weights = w.grid().weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i] * decay_integrand(w.values()[i], power);
  }
  Integrability out;
  out.value = acc;
  // 1/(1+|x|^q)^{2/(p-2)} is integrable on R^n iff 2q/(p-2) > n; the shift
  // only increases a, so the verdict follows the base. A constant weight
  // never qualifies.
  out.finite_on_rn = w.family().base == WeightBase::Polynomial &&
                     2.0 * w.family().q / (tp.p - 2.0) > static_cast<double>(tp.n_theory);
  return out;
}

double tail_mass(const WeightField& w, const TheoryParams& tp, double radius) {
  const Grid& g = w.grid();
  const double r_max = g.half_width() * std::sqrt(static_cast<double>(g.dim()));
  if (!(radius > 0.0) || radius > r_max * (1.0 + 1e-14)) {
    throw Error(ErrorKind::OutOfRange, "tail radius must lie in (0, R_dom*sqrt(d)]");
  }
  const double power = tp.decay_power();
  const auto weights = g.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (g.radius(i) > radius) acc += weights[i] * decay_integrand(w.values()[i], power);
  }
  return acc;
}

double embedding_constant(double integral, const TheoryParams& tp) {
  return std::pow(integral + 1.0, 1.0 / tp.theta_conj);
}

double embedding_constant(const WeightField& w0, const TheoryParams& tp) {
  if (w0.eps() != 0.0) {
    throw Error(ErrorKind::InvalidArgument,
                "embedding constant must be computed from the eps = 0 member");
  }
  return embedding_constant(integrability(w0, tp).value, tp);
}

}  // namespace plap
