#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plap/grid.hpp"

namespace plap {

// Exponent bookkeeping for a given p and the dimension n the theory refers to
// (which need not match the lattice dimension).
struct TheoryParams {
  double p = 4.0;
  int n_theory = 5;
  double theta = 2.0;        // p / 2
  double theta_conj = 2.0;   // 1/θ + 1/θ′ = 1, i.e. p / (p − 2)
  double p_conj = 4.0 / 3.0;
  std::optional<double> p_star;  // pn / (n − p) when n > p

  // Throws InvalidArgument unless p > 2.
  static TheoryParams make(double p, int n_theory);

  // 2 < p < n; reported as a warning when violated.
  bool exponent_range_ok() const noexcept { return p > 2.0 && p < n_theory; }
  // 2 / (p − 2), the power appearing in the integrability condition.
  double decay_power() const noexcept { return 2.0 / (p - 2.0); }
};

enum class WeightBase { Constant, Polynomial };
enum class WeightShift { None, Constant, Bump };

// a_ε(x) = base(x) + ε g(x) with base ∈ {1, 1 + |x|^q} and g ∈ {0, 1, e^{-|x|²}}.
struct WeightFamily {
  WeightBase base = WeightBase::Polynomial;
  double q = 6.0;
  WeightShift shift = WeightShift::None;

  double base_value(double r) const noexcept;
  double shift_value(double r) const noexcept;
  // sup |g|
  double shift_sup() const noexcept;
};

// Smallest integer q with 2q/(p − 2) >= n + 1.
double default_growth_exponent(const TheoryParams& tp);

std::string to_string(WeightBase b);
std::string to_string(WeightShift s);
WeightBase parse_weight_base(const std::string& s);
WeightShift parse_weight_shift(const std::string& s);

class WeightField {
 public:
  WeightField(Grid grid, std::vector<double> values, WeightFamily family,
              double eps);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  const WeightFamily& family() const noexcept { return family_; }
  double eps() const noexcept { return eps_; }
  double min_value() const noexcept;

  // Analytic ‖a_ε − a₀‖_∞ of the family.
  double analytic_gap() const noexcept { return eps_ * family_.shift_sup(); }

 private:
  Grid grid_;
  std::vector<double> values_;
  WeightFamily family_;
  double eps_;
};

// Throws OutOfRange unless eps in [0, 1] and InvalidArgument for q < 0.
WeightField make_weight(const Grid& grid, const WeightFamily& family, double eps);

// max over nodes |a − b|
double sup_distance(const WeightField& a, const WeightField& b);

struct Integrability {
  double value = 0.0;       // lattice quadrature of ∫ a^{−2/(p−2)}
  bool finite_on_rn = false;  // analytic verdict for the untruncated family
};

Integrability integrability(const WeightField& w, const TheoryParams& tp);

// Quadrature of ∫_{|x| > R} a^{−2/(p−2)} over lattice nodes. Throws
// OutOfRange unless 0 < R <= R_dom·√d.
double tail_mass(const WeightField& w, const TheoryParams& tp, double radius);

// c = (∫ a₀^{−2/(p−2)} + 1)^{1/θ′}; valid for every ε ∈ [0, 1].
double embedding_constant(double integral, const TheoryParams& tp);
double embedding_constant(const WeightField& w0, const TheoryParams& tp);

}  // namespace plap
