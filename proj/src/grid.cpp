#include "plap/grid.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "plap/error.hpp"
#include "plap/weights.hpp"

namespace plap {

Grid Grid::make(int dim, double half_width, std::size_t m) {
  if (dim < 1 || dim > 3) {
    throw Error(ErrorKind::InvalidDimension,
                "grid dimension must be 1, 2 or 3 (got " + std::to_string(dim) + ")");
  }
  if (m < 3) {
    throw Error(ErrorKind::TooFewPoints,
                "grid needs at least 3 points per axis (got " + std::to_string(m) + ")");
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw Error(ErrorKind::InvalidArgument, "grid half-width must be positive");
  }

  Grid g;
  g.dim_ = dim;
  g.half_width_ = half_width;
  g.m_ = m;
  g.h_ = 2.0 * half_width / static_cast<double>(m - 1);

  std::size_t n = 1;
  for (int k = 0; k < dim; ++k) n *= m;

  std::vector<double> w(n, 1.0);
  std::vector<unsigned char> boundary(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rest = i;
    for (int k = 0; k < dim; ++k) {
      const std::size_t ik = rest % m;
      rest /= m;
      const bool edge = ik == 0 || ik == m - 1;
      w[i] *= edge ? 0.5 * g.h_ : g.h_;
      if (edge) boundary[i] = 1;
    }
  }
  g.weights_ = std::make_shared<const std::vector<double>>(std::move(w));
  g.boundary_ = std::make_shared<const std::vector<unsigned char>>(std::move(boundary));
  return g;
}

std::array<std::size_t, 3> Grid::multi_index(std::size_t idx) const noexcept {
  std::array<std::size_t, 3> mi{0, 0, 0};
  for (int k = 0; k < dim_; ++k) {
    mi[static_cast<std::size_t>(k)] = idx % m_;
    idx /= m_;
  }
  return mi;
}

std::array<double, 3> Grid::position(std::size_t idx) const noexcept {
  const auto mi = multi_index(idx);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int k = 0; k < dim_; ++k) {
    const auto ik = mi[static_cast<std::size_t>(k)];
    // Symmetric formula so that mirrored nodes get exactly opposite coordinates.
    x[static_cast<std::size_t>(k)] =
        half_width_ * (2.0 * static_cast<double>(ik) - static_cast<double>(m_ - 1)) /
        static_cast<double>(m_ - 1);
  }
  return x;
}

double Grid::radius(std::size_t idx) const noexcept {
  const auto x = position(idx);
  return std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
}

State::State(Grid grid) : grid_(std::move(grid)), values_(grid_.size(), 0.0) {}

State::State(Grid grid, std::vector<double> values, std::optional<double> time_tag)
    : grid_(std::move(grid)), values_(std::move(values)), time_tag_(time_tag) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorKind::GridMismatch, "state has " + std::to_string(values_.size()) +
                                             " values for a grid of " +
                                             std::to_string(grid_.size()) + " nodes");
  }
}

bool State::is_finite() const noexcept {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool State::satisfies_dirichlet() const noexcept {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (grid_.is_boundary(i) && values_[i] != 0.0) return false;
  }
  return true;
}

State& State::operator+=(const State& o) { return axpy(1.0, o); }
State& State::operator-=(const State& o) { return axpy(-1.0, o); }

State& State::operator*=(double s) noexcept {
  for (double& v : values_) v *= s;
  return *this;
}

State& State::axpy(double s, const State& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += s * o.values_[i];
  return *this;
}

State operator+(State a, const State& b) { return a += b; }
State operator-(State a, const State& b) { return a -= b; }
State operator*(double s, State a) { return a *= s; }

void require_same_grid(const Grid& a, const Grid& b) {
  if (!(a == b)) {
    throw Error(ErrorKind::GridMismatch, "operands live on different grids");
  }
}

double inner_l2(const State& u, const State& v) {
  require_same_grid(u.grid(), v.grid());
  return kernels::weighted_dot(u.grid().weights(), u.values(), v.values());
}

double norm_l2(const State& u) {
  return std::sqrt(kernels::weighted_dot(u.grid().weights(), u.values(), u.values()));
}

double norm_lp(const State& u, double p) {
  if (!(p >= 1.0)) throw Error(ErrorKind::InvalidArgument, "L^p norm needs p >= 1");
  return std::pow(kernels::weighted_pow_sum(u.grid().weights(), u.values(), p), 1.0 / p);
}

double norm_l2_sq_outside(const State& u, double radius) {
  const Grid& g = u.grid();
  const auto w = g.weights();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.radius(i) > radius) acc += w[i] * u[i] * u[i];
  }
  return acc;
}

FaceField grad(const State& u) {
  const Grid& g = u.grid();
  FaceField f{g, std::vector<std::vector<double>>(static_cast<std::size_t>(g.dim()),
                                                   std::vector<double>(g.size(), 0.0))};
  const std::size_t m = g.points_per_axis();
  std::size_t stride = 1;
  for (int k = 0; k < g.dim(); ++k) {
    auto& comp = f.components[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < g.size(); ++i) {
      if ((i / stride) % m + 1 < m) comp[i] = (u[i + stride] - u[i]) / g.spacing();
    }
    stride *= m;
  }
  return f;
}

double norm_E_pow(const State& u, const WeightField& w, double p) {
  require_same_grid(u.grid(), w.grid());
  if (!(p > 2.0)) throw Error(ErrorKind::InvalidArgument, "E-norm needs p > 2");
  const Grid& g = u.grid();
  return kernels::face_pow_sum(g.stencil(), u.values(), p) +
         kernels::weighted_pow_sum(g.weights(), w.values(), u.values(), p);
}

double norm_E(const State& u, const WeightField& w, double p) {
  return std::pow(norm_E_pow(u, w, p), 1.0 / p);
}

void write_snapshot(const std::filesystem::path& path, const State& u) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write snapshot " + path.string());
  out << std::setprecision(17);
  const Grid& g = u.grid();
  out << "d " << g.dim() << '\n'
      << "R_dom " << g.half_width() << '\n'
      << "m " << g.points_per_axis() << '\n'
      << "time_tag ";
  if (u.time_tag()) {
    out << *u.time_tag();
  } else {
    out << "none";
  }
  out << '\n';
  for (double v : u.values()) out << v << '\n';
  if (!out) throw Error(ErrorKind::Io, "failed writing snapshot " + path.string());
}

State read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read snapshot " + path.string());

  auto expect_key = [&](const char* key) {
    std::string k;
    if (!(in >> k) || k != key) {
      throw Error(ErrorKind::Parse, path.string() + ": expected header key '" + key + "'");
    }
  };
  int d = 0;
  double r = 0.0;
  std::size_t m = 0;
  expect_key("d");
  in >> d;
  expect_key("R_dom");
  in >> r;
  expect_key("m");
  in >> m;
  expect_key("time_tag");
  std::string tag;
  in >> tag;
  if (!in) throw Error(ErrorKind::Parse, path.string() + ": truncated header");

  Grid g = Grid::make(d, r, m);
  std::optional<double> time_tag;
  if (tag != "none") time_tag = std::stod(tag);

  std::vector<double> values(g.size());
  for (auto& v : values) {
    if (!(in >> v)) {
      throw Error(ErrorKind::Parse, path.string() + ": expected " +
                                        std::to_string(g.size()) + " node values");
    }
  }
  return State(g, std::move(values), time_tag);
}

}  // namespace plap
