#include "plap/forcing.hpp"

#include <algorithm>
#include <cmath>

#include "plap/error.hpp"

namespace plap {

double L1Profile::operator()(double t) const noexcept {
  switch (kind) {
    case Kind::Constant: return b0;
    case Kind::Ramp: return b0 + b1 * std::max(0.0, t - t0);
    case Kind::Exponential: return b0 * std::exp(b1 * std::min(t, t_cap));
  }
  return b0;
}

std::string to_string(L1Profile::Kind k) {
  switch (k) {
    case L1Profile::Kind::Constant: return "constant";
    case L1Profile::Kind::Ramp: return "ramp";
    case L1Profile::Kind::Exponential: return "exponential";
  }
  return "constant";
}

L1Profile::Kind parse_l1_kind(const std::string& s) {
  if (s == "constant") return L1Profile::Kind::Constant;
  if (s == "ramp") return L1Profile::Kind::Ramp;
  if (s == "exponential") return L1Profile::Kind::Exponential;
  throw Error(ErrorKind::Parse, "unknown L1 profile '" + s + "'");
}

std::string to_string(Coupling::Kind k) {
  switch (k) {
    case Coupling::Kind::None: return "none";
    case Coupling::Kind::Sin: return "sin";
    case Coupling::Kind::Tanh: return "tanh";
  }
  return "none";
}

Coupling::Kind parse_coupling_kind(const std::string& s) {
  if (s == "none") return Coupling::Kind::None;
  if (s == "sin") return Coupling::Kind::Sin;
  if (s == "tanh") return Coupling::Kind::Tanh;
  throw Error(ErrorKind::Parse, "unknown coupling '" + s + "'");
}

namespace {

State unit_bump(const Grid& grid, double width) {
  State s = State::sample(grid, [&](const std::array<double, 3>& x) {
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    return std::exp(-0.5 * r2 / (width * width));
  });
  const double n = norm_l2(s);
  s *= 1.0 / n;
  return s;
}

}  // namespace

Forcing::Forcing(const Grid& grid, double lipschitz, L1Profile l1, Coupling coupling,
                 double profile_width)
    : lipschitz_(lipschitz),
      l1_(l1),
      coupling_(coupling),
      profile_width_(profile_width),
      profile_(grid) {
  if (!(lipschitz > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "forcing Lipschitz constant L must be > 0");
  }
  if (!(l1.b0 >= 0.0) || !(l1.b1 >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "L1 profile needs b0 >= 0 and b1 >= 0 to be nondecreasing");
  }
  if (coupling.sign != 1.0 && coupling.sign != -1.0) {
    throw Error(ErrorKind::InvalidArgument, "coupling sign must be +1 or -1");
  }
  if (!(profile_width > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "forcing profile width must be > 0");
  }
  profile_ = unit_bump(grid, profile_width);
}

void Forcing::eval(double t, const State& u, State& out) const {
  require_same_grid(u.grid(), profile_.grid());
  require_same_grid(out.grid(), profile_.grid());
  const double amp = l1_(t);
  const double c = coupling_.sign * lipschitz_;
  const auto phi = profile_.values();
  const auto in = u.values();
  auto dst = out.values();
  switch (coupling_.kind) {
    case Coupling::Kind::None:
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = amp * phi[i];
      break;
    case Coupling::Kind::Sin:
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = amp * phi[i] + c * std::sin(in[i]);
      break;
    case Coupling::Kind::Tanh:
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = amp * phi[i] + c * std::tanh(in[i]);
      break;
  }
  const Grid& g = profile_.grid();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    if (g.is_boundary(i)) dst[i] = 0.0;
  }
}

State Forcing::eval(double t, const State& u) const {
  State out(profile_.grid());
  eval(t, u, out);
  return out;
}

}  // namespace plap
