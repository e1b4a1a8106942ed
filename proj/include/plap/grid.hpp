#pragma once

// Truncated lattice surrogate for R^n: the box [-R, R]^d sampled with m
// points per axis, homogeneous Dirichlet data on the box boundary, tensor
// trapezoid quadrature on nodes and a staggered (face-centred) gradient.

#include <array>
#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "plap/kernels.hpp"

namespace plap {

class WeightField;

class Grid {
 public:
  // Throws InvalidDimension unless dim in {1,2,3}, TooFewPoints unless m >= 3,
  // InvalidArgument unless half_width > 0.
  static Grid make(int dim, double half_width, std::size_t m);

  int dim() const noexcept { return dim_; }
  double half_width() const noexcept { return half_width_; }
  std::size_t points_per_axis() const noexcept { return m_; }
  double spacing() const noexcept { return h_; }
  std::size_t size() const noexcept { return weights_->size(); }

  // Node quadrature weights; they sum to (2R)^d.
  std::span<const double> weights() const noexcept { return *weights_; }
  std::span<const unsigned char> boundary_mask() const noexcept { return *boundary_; }
  bool is_boundary(std::size_t idx) const noexcept { return (*boundary_)[idx] != 0; }

  // Axis 0 varies fastest in the flat index.
  std::array<std::size_t, 3> multi_index(std::size_t idx) const noexcept;
  std::array<double, 3> position(std::size_t idx) const noexcept;
  double radius(std::size_t idx) const noexcept;

  kernels::StencilView stencil() const noexcept {
    return {dim_, m_, h_, weights()};
  }

  // Same geometry; snapshots read back from disk compare equal to the grid
  // that wrote them.
  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dim_ == b.dim_ && a.m_ == b.m_ && a.half_width_ == b.half_width_;
  }

 private:
  Grid() = default;

  int dim_ = 1;
  double half_width_ = 1.0;
  std::size_t m_ = 3;
  double h_ = 1.0;
  std::shared_ptr<const std::vector<double>> weights_;
  std::shared_ptr<const std::vector<unsigned char>> boundary_;
};

inline Grid make_grid(int dim, double half_width, std::size_t m) {
  return Grid::make(dim, half_width, m);
}

enum class Boundary { Dirichlet, Keep };

// A grid function. The Dirichlet invariant (zero on boundary nodes) is what
// every solver relies on; `Boundary::Keep` exists for quadrature checks on
// profiles that do not vanish at the box edge.
class State {
 public:
  explicit State(Grid grid);
  State(Grid grid, std::vector<double> values,
        std::optional<double> time_tag = std::nullopt);

  template <typename F>
  static State sample(const Grid& grid, F&& f,
                      Boundary policy = Boundary::Dirichlet) {
    State s(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (policy == Boundary::Dirichlet && grid.is_boundary(i)) continue;
      s.values_[i] = f(grid.position(i));
    }
    return s;
  }

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  std::optional<double> time_tag() const noexcept { return time_tag_; }
  void set_time_tag(std::optional<double> t) noexcept { time_tag_ = t; }

  bool is_finite() const noexcept;
  bool satisfies_dirichlet() const noexcept;

  State& operator+=(const State& o);
  State& operator-=(const State& o);
  State& operator*=(double s) noexcept;
  // this += s * o
  State& axpy(double s, const State& o);

 private:
  Grid grid_;
  std::vector<double> values_;
  std::optional<double> time_tag_;
};

State operator+(State a, const State& b);
State operator-(State a, const State& b);
State operator*(double s, State a);

// Throws GridMismatch.
void require_same_grid(const Grid& a, const Grid& b);

double inner_l2(const State& u, const State& v);
double norm_l2(const State& u);
double norm_lp(const State& u, double p);
// Σ_{|x_i| > R} w_i u_i², the L² mass outside the ball of radius R.
double norm_l2_sq_outside(const State& u, double radius);

// Staggered gradient: component k at node i is (u[i + e_k] - u[i]) / h,
// defined for i_k < m - 1 and stored as 0 elsewhere.
struct FaceField {
  Grid grid;
  std::vector<std::vector<double>> components;
};

FaceField grad(const State& u);

// ‖u‖_E^p = Σ_faces w_f |Du|^p + Σ_nodes w a |u|^p
double norm_E_pow(const State& u, const WeightField& w, double p);
double norm_E(const State& u, const WeightField& w, double p);

// Text snapshot: header lines `d`, `R_dom`, `m`, `time_tag` followed by one
// node value per line in flat index order, 17 significant digits.
void write_snapshot(const std::filesystem::path& path, const State& u);
State read_snapshot(const std::filesystem::path& path);

}  // namespace plap
