#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "plap/error.hpp"
#include "support.hpp"

using namespace plap;

namespace {

const WeightFamily kQuadratic{WeightBase::Polynomial, 2.0, WeightShift::None};

}  // namespace

TEST_CASE("theory parameters") {
  for (double p : {2.5, 3.0, 4.0, 6.0, 9.0}) {
    const TheoryParams tp = TheoryParams::make(p, 5);
    CHECK(std::fabs(1.0 / tp.theta + 1.0 / tp.theta_conj - 1.0) < 1e-14);
    CHECK(std::fabs(1.0 / tp.p + 1.0 / tp.p_conj - 1.0) < 1e-14);
    CHECK(tp.theta == p / 2.0);
    CHECK(std::fabs(tp.theta_conj / tp.theta - 2.0 / (p - 2.0)) < 1e-14);
    if (p < 5.0) {
      REQUIRE(tp.p_star.has_value());
      CHECK(*tp.p_star == doctest::Approx(p * 5.0 / (5.0 - p)));
      CHECK(tp.exponent_range_ok());
    } else {
      CHECK_FALSE(tp.p_star.has_value());
      CHECK_FALSE(tp.exponent_range_ok());
    }
  }
  CHECK_THROWS_AS(TheoryParams::make(2.0, 5), Error);
  CHECK(default_growth_exponent(TheoryParams::make(4.0, 5)) == 6.0);
  CHECK(default_growth_exponent(TheoryParams::make(3.0, 2)) == 2.0);
}

TEST_CASE("make_weight examples") {
  const Grid g = make_grid(1, 4.0, 9);  // nodes at integers
  const WeightField w = make_weight(g, kQuadratic, 0.0);
  CHECK(w.min_value() == 1.0);
  CHECK(w.values()[4] == 1.0);
  CHECK(w.values()[6] == 5.0);

  const WeightField w4 = make_weight(g, {WeightBase::Polynomial, 4.0, WeightShift::None}, 0.0);
  CHECK(w4.values()[6] == 17.0);

  const WeightFamily shifted{WeightBase::Polynomial, 2.0, WeightShift::Constant};
  const WeightField a = make_weight(g, shifted, 0.25);
  const WeightField a0 = make_weight(g, shifted, 0.0);
  CHECK(sup_distance(a, a0) == 0.25);
  CHECK(a.analytic_gap() == 0.25);

  CHECK_THROWS_AS(make_weight(g, shifted, 1.5), Error);
  CHECK_THROWS_AS(make_weight(g, shifted, -0.1), Error);
}

TEST_CASE("weights stay above one and the gap is linear in eps") {
  const Grid g = make_grid(2, 3.0, 33);  // odd m: the origin is a node
  for (WeightShift s : {WeightShift::Constant, WeightShift::Bump}) {
    const WeightFamily fam{WeightBase::Polynomial, 6.0, s};
    const WeightField a0 = make_weight(g, fam, 0.0);
    for (double eps : {0.0, 0.05, 0.2, 0.7, 1.0}) {
      const WeightField a = make_weight(g, fam, eps);
      for (double v : a.values()) REQUIRE(v >= 1.0);
      // Subtracting large base values costs a few ulps of max a.
      double amax = 0.0;
      for (double v : a.values()) amax = std::max(amax, v);
      const double slack = 4.0 * std::numeric_limits<double>::epsilon() * amax;
      CHECK(std::fabs(sup_distance(a, a0) - eps * fam.shift_sup()) <= slack);
      CHECK(std::fabs(sup_distance(a, a0) - a.analytic_gap()) <= slack);
    }
  }
}

TEST_CASE("integrability") {
  const TheoryParams tp4 = TheoryParams::make(4.0, 1);
  const WeightFamily constant{WeightBase::Constant, 0.0, WeightShift::None};
  const Integrability c = integrability(make_weight(make_grid(1, 1.0, 21), constant, 0.0), tp4);
  CHECK(c.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_FALSE(c.finite_on_rn);

  for (double R : {1.0, 4.0, 8.0}) {
    const Grid g = make_grid(1, R, 2049);
    const Integrability q = integrability(make_weight(g, kQuadratic, 0.0), tp4);
    CHECK(q.value == doctest::Approx(2.0 * std::atan(R)).epsilon(1e-6));
    CHECK(q.finite_on_rn);  // 2·2/2 = 2 > 1
  }

  // 2q/(p − 2) = n is the log-divergent borderline.
  const TheoryParams tp43 = TheoryParams::make(4.0, 3);
  const WeightFamily border{WeightBase::Polynomial, 3.0, WeightShift::None};
  CHECK_FALSE(integrability(make_weight(make_grid(1, 2.0, 9), border, 0.0), tp43).finite_on_rn);
  const WeightFamily above{WeightBase::Polynomial, 3.5, WeightShift::None};
  CHECK(integrability(make_weight(make_grid(1, 2.0, 9), above, 0.0), tp43).finite_on_rn);
}

TEST_CASE("tail mass") {
  const TheoryParams tp = TheoryParams::make(4.0, 1);
  const Grid g = make_grid(1, 8.0, 4097);
  const WeightField w = make_weight(g, kQuadratic, 0.0);
  CHECK(tail_mass(w, tp, 8.0) == 0.0);
  double prev = tail_mass(w, tp, 0.25);
  for (double R : {0.5, 1.0, 2.0, 3.0, 5.0, 7.5}) {
    const double t = tail_mass(w, tp, R);
    CHECK(t <= prev);
    prev = t;
    // Untruncated tail π − 2 arctan R minus the part beyond the box; R is a
    // node, so each side loses the half trapezoid weight at R.
    const double truncated = 2.0 * (std::atan(8.0) - std::atan(R));
    CHECK(t == doctest::Approx(truncated - g.spacing() / (1.0 + R * R)).epsilon(1e-5));
    CHECK(t <= std::numbers::pi - 2.0 * std::atan(R));
  }
  CHECK_THROWS_AS(tail_mass(w, tp, 0.0), Error);
  CHECK_THROWS_AS(tail_mass(w, tp, 8.5), Error);
}

TEST_CASE("embedding constant") {
  const TheoryParams tp = TheoryParams::make(4.0, 5);
  CHECK(embedding_constant(2.0, tp) == doctest::Approx(1.7320508075688772).epsilon(1e-15));
  CHECK(embedding_constant(0.0, tp) == 1.0);
  const Grid g = support::desk_grid();
  CHECK_THROWS_AS(embedding_constant(make_weight(g, support::desk_family(), 0.1), tp), Error);
}

TEST_CASE("embedding, weighted Hölder and tail inequalities on random states") {
  const Grid g = support::desk_grid();
  const TheoryParams tp = support::desk_theory();
  const WeightField w0 = make_weight(g, support::desk_family(), 0.0);
  const double c = embedding_constant(w0, tp);
  Rng rng(21);
  for (double eps : {0.0, 0.1, 0.5}) {
    const WeightField w = make_weight(g, support::desk_family(), eps);
    const double integ_eps = integrability(w, tp).value;
    for (int k = 0; k < 200; ++k) {
      const State u = support::random_state(g, rng);
      const double l2sq = norm_l2(u) * norm_l2(u);
      const double e2 = std::pow(norm_E_pow(u, w, tp.p), 2.0 / tp.p);
      REQUIRE(l2sq <= c * e2 * (1.0 + 1e-12));
      const double weighted = kernels::weighted_pow_sum(g.weights(), w.values(), u.values(), tp.p);
      REQUIRE(l2sq <= std::pow(integ_eps, 1.0 / tp.theta_conj) *
                          std::pow(weighted, 2.0 / tp.p) * (1.0 + 1e-12));
      for (double R : {2.0, 4.0, 6.0}) {
        REQUIRE(norm_l2_sq_outside(u, R) <=
                std::pow(tail_mass(w, tp, R), 1.0 / tp.theta_conj) * e2 * (1.0 + 1e-12));
      }
    }
  }
}
