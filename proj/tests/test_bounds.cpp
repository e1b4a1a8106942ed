#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "plap/error.hpp"
#include "support.hpp"

using namespace plap;

namespace {

// Independent re-derivation of the closed-form chain, kept deliberately
// literal so that a typo in either copy shows up as a disagreement.
struct DualBounds {
  double p, c_coerc, L, eta;
  std::function<double(double)> l1;

  double theta() const { return p / 2.0; }
  double theta_c() const { return 1.0 / (1.0 - 2.0 / p); }
  double p_c() const { return 1.0 / (1.0 - 1.0 / p); }
  double gamma() const {
    return c_coerc - std::pow(eta, theta()) / theta() - std::pow(eta, p) / p;
  }
  double delta(double t) const {
    return std::pow(L / eta, theta_c()) / theta_c() + std::pow(l1(t) / eta, p_c()) / p_c();
  }
  double beta1(double t) const { return std::pow(delta(t) / gamma(), 2.0 / p) + 1.0; }
  double T1() const { return 2.0 / (gamma() * (p - 2.0)); }
  double beta2(double t) const {
    const double R = T1();
    const double a1 = R * p / theta();
    const double a2 = R * p / theta_c() * std::pow(L, 2.0 * theta_c()) + R * p * l1(t + R) * l1(t + R);
    const double a3 = beta1(t) / 2.0 + R * L * beta1(t + R) + R * l1(t + R) * std::sqrt(beta1(t + R));
    return (a3 / R + a2) * std::exp(a1);
  }
};

}  // namespace

TEST_CASE("p = 4 reference parameters") {
  const TheoryParams tp = TheoryParams::make(4.0, 5);
  const L1Profile one{L1Profile::Kind::Constant, 1.0, 0.0, 0.0, 10.0};
  const BoundsReport br = build_bounds(tp, 1.0, 1.0, one, {0.0, 0.5});
  CHECK(br.c_coerc == 1.0);
  CHECK(br.gamma == doctest::Approx(0.859375).epsilon(1e-15));
  CHECK(br.delta(0.0) == doctest::Approx(3.8898815748423097).epsilon(1e-14));
  CHECK(br.delta(0.0) == doctest::Approx(2.0 + 0.75 * std::pow(2.0, 4.0 / 3.0)).epsilon(1e-14));
  CHECK(br.beta1(0.0) == doctest::Approx(3.1275355815416100).epsilon(1e-14));
  CHECK(br.T1 == doctest::Approx(1.1636363636363636).epsilon(1e-14));
  CHECK(br.T2 == 2.0 * br.T1);
  CHECK(br.R_window == br.T1);
  for (double t : {-5.0, 0.0, 10.0}) CHECK(br.beta1(t) == br.beta1(0.0));
  for (double t : {-5.0, 0.0, 10.0}) CHECK(br.beta2(t) == br.beta2(0.0));
}

TEST_CASE("T1 solves the transient condition with equality") {
  const TheoryParams tp = TheoryParams::make(4.0, 5);
  // η² = √3 − 1 gives γ = 1 − (η²/2 + η⁴/4) = 1/2.
  const double eta = std::sqrt(std::sqrt(3.0) - 1.0);
  const BoundsReport br = build_bounds(tp, 1.0, 1.0, {}, {0.0, eta});
  CHECK(br.gamma == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(br.T1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(br.transient(br.T1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(br.transient(2.0 * br.T1) < 1.0);
}

TEST_CASE("beta2 against frozen values and the dual evaluator") {
  const TheoryParams tp = TheoryParams::make(3.0, 5);
  const L1Profile ramp{L1Profile::Kind::Ramp, 1.0, 0.2, 0.0, 10.0};
  const BoundsReport br = build_bounds(tp, 1.2, 0.5, ramp, {0.0, 0.3});
  CHECK(br.gamma == doctest::Approx(0.64218126281169749).epsilon(1e-14));
  CHECK(br.T1 == doctest::Approx(3.1143854793322530).epsilon(1e-14));
  CHECK(br.a1 == doctest::Approx(6.2287709586645059).epsilon(1e-14));
  CHECK(br.a2(2.0) == doctest::Approx(38.281155015721703).epsilon(1e-13));
  CHECK(br.a3(2.0) == doctest::Approx(34.875435020402087).epsilon(1e-13));
  CHECK(br.beta1(2.0) == doctest::Approx(6.4914581974161527).epsilon(1e-14));
  CHECK(beta2_curve(br, 2.0) == doctest::Approx(25092.542632755515).epsilon(1e-12));

  Rng rng(9);
  std::uniform_real_distribution<double> up(2.2, 6.0), ce(1.0, 2.0), lip(0.1, 2.0), b(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const TheoryParams t = TheoryParams::make(up(rng), 5);
    const L1Profile l1{L1Profile::Kind::Ramp, b(rng), b(rng), -1.0, 10.0};
    const BoundsReport r = build_bounds(t, ce(rng), lip(rng), l1);
    const DualBounds d{t.p, r.c_coerc, r.lipschitz, r.eta, [l1](double s) { return l1(s); }};
    CHECK(support::rel_err(r.gamma, d.gamma()) < 1e-12);
    CHECK(support::rel_err(r.T1, d.T1()) < 1e-12);
    for (double s : {-3.0, 0.0, 2.5, 7.0}) {
      CHECK(support::rel_err(r.delta(s), d.delta(s)) < 1e-12);
      CHECK(support::rel_err(r.beta1(s), d.beta1(s)) < 1e-12);
      CHECK(support::rel_err(r.beta2(s), d.beta2(s)) < 1e-12);
    }
  }
}

TEST_CASE("eta selection") {
  const TheoryParams tp = TheoryParams::make(4.0, 5);
  const L1Profile ramp{L1Profile::Kind::Ramp, 1.0, 0.1, -10.0, 10.0};
  const BoundsReport br = build_bounds(tp, 1.7590858118695025, 1.0, ramp);
  CHECK(br.gamma > 0.0);
  // The chosen η is a local minimiser of β₁(t_ref).
  const auto beta1_at = [&](double eta) {
    return std::pow(br.delta_at(eta, 0.0) / br.gamma_at(eta), 2.0 / tp.p) + 1.0;
  };
  CHECK(beta1_at(br.eta) <= beta1_at(br.eta * 1.01));
  CHECK(beta1_at(br.eta) <= beta1_at(br.eta * 0.99));

  try {
    build_bounds(tp, 1.7590858118695025, 1.0, ramp, {0.0, 5.0});
    FAIL("expected no-feasible-eta");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoFeasibleEta);
    CHECK(std::string(e.what()).find("gamma(eta)") != std::string::npos);
  }
  CHECK_THROWS(build_bounds(tp, 0.5, 1.0, ramp));
  CHECK_THROWS(build_bounds(tp, 1.5, 0.0, ramp));
}

TEST_CASE("beta curves are nondecreasing for nondecreasing L1") {
  const TheoryParams tp = TheoryParams::make(4.0, 5);
  for (const L1Profile& l1 : {L1Profile{L1Profile::Kind::Ramp, 1.0, 0.3, 0.0, 10.0},
                              L1Profile{L1Profile::Kind::Exponential, 0.5, 0.2, 0.0, 5.0}}) {
    const BoundsReport br = build_bounds(tp, 1.5, 1.0, l1);
    double b1 = br.beta1(-10.0), b2 = br.beta2(-10.0);
    for (double t = -10.0; t <= 15.0; t += 0.25) {
      CHECK(br.beta1(t) >= b1);
      CHECK(br.beta2(t) >= b2);
      b1 = br.beta1(t);
      b2 = br.beta2(t);
    }
  }
}

TEST_CASE("comparison ODE oracle") {
  const auto zero = [](double) { return 0.0; };
  const Curve flat = ode_decay_oracle(0.7, 2.0, zero, 0.0, 0.0, 5.0);
  for (double y : flat.y) CHECK(y == 0.0);

  // δ ≡ 0: y′ = −2γ y^θ, so y stays below [2γ(θ − 1)(t − τ)]^{−1/(θ−1)} and in
  // particular below the pure-decay envelope with constant γ(θ − 1).
  for (double theta : {1.25, 1.5, 2.0, 3.0}) {
    const double gamma = 0.4;
    const Curve c = ode_decay_oracle(gamma, theta, zero, 100.0, 0.0, 20.0);
    for (std::size_t k = 1; k < c.t.size(); k += 50) {
      const double env = std::pow(gamma * (theta - 1.0) * c.t[k], -1.0 / (theta - 1.0));
      CHECK(c.y[k] <= env);
    }
  }

  // Constant δ: y → (δ/γ)^{1/θ}.
  const Curve eq = ode_decay_oracle(0.5, 2.0, [](double) { return 2.0; }, 30.0, 0.0, 40.0);
  CHECK(eq.y.back() == doctest::Approx(2.0).epsilon(0.01));
  const Curve eq2 = ode_decay_oracle(0.5, 2.0, [](double) { return 2.0; }, 0.0, 0.0, 40.0);
  CHECK(eq2.y.back() == doctest::Approx(2.0).epsilon(0.01));
}

TEST_CASE("closed-form decay bound dominates the comparison ODE") {
  Rng rng(11);
  std::uniform_real_distribution<double> up(2.2, 6.0), ce(1.0, 2.5), lip(0.1, 2.0), b(0.0, 1.0),
      y0(0.0, 400.0);
  for (int k = 0; k < 20; ++k) {
    const TheoryParams tp = TheoryParams::make(up(rng), 5);
    const L1Profile l1{L1Profile::Kind::Ramp, b(rng), b(rng), 0.0, 10.0};
    const BoundsReport br = build_bounds(tp, ce(rng), lip(rng), l1);
    const Curve c = ode_decay_oracle(br.gamma, tp.theta, [&](double t) { return br.delta(t); },
                                     y0(rng), -2.0, 10.0);
    for (std::size_t j = 1; j < c.t.size(); ++j) {
      REQUIRE(0.5 * c.y[j] <= br.decay_bound(c.t[j], -2.0));
    }
  }
}

TEST_CASE("uniform Gronwall oracle") {
  const auto zero = uniform_gronwall_oracle(1.0, 2.0, 3.0, 0.5, std::vector<double>(10, 0.0));
  CHECK(zero.holds);
  CHECK(zero.margin == doctest::Approx((3.0 / 0.5 + 2.0) * std::exp(1.0)));
  std::vector<double> bad(10, 0.0);
  bad.back() = 1e3;
  const auto v = uniform_gronwall_oracle(1.0, 2.0, 3.0, 0.5, bad);
  CHECK_FALSE(v.holds);
  CHECK(v.margin < 0.0);
}

TEST_CASE("perturbation envelope") {
  CHECK(perturbation_envelope(1.0, 3.0, 2.0, 0.0, 0.0, 0.0) == 0.0);
  CHECK(perturbation_envelope(1.0, 3.0, 1.5, 1.5, 0.25, 0.1) == 0.25);
  CHECK(perturbation_envelope(0.5, 2.0, 3.0, 1.0, 0.1, 0.2) ==
        doctest::Approx((0.1 + 2.0 * 2.0 * 2.0 * 0.2) * std::exp(2.0)).epsilon(1e-15));
  CHECK(perturbation_constant(0.5, 2.0, 3.0, 1.0) == doctest::Approx(8.0 * std::exp(2.0)));
  CHECK(perturbation_constant(0.5, 0.1, 3.0, 1.0) == doctest::Approx(std::exp(2.0)));
}

TEST_CASE("bounds export") {
  const TheoryParams tp = TheoryParams::make(4.0, 5);
  const BoundsReport br = build_bounds(tp, 1.5, 1.0, {L1Profile::Kind::Ramp, 1.0, 0.1, 0.0, 10.0});
  const auto dir = std::filesystem::temp_directory_path() / "plap_bounds_test";
  std::filesystem::create_directories(dir);
  write_bounds_json(dir / "b.json", br);
  std::ifstream in(dir / "b.json");
  const auto j = nlohmann::json::parse(in);
  CHECK(j.at("gamma").get<double>() == br.gamma);
  CHECK(j.at("beta2_t_ref").get<double>() == br.beta2(0.0));
  write_bounds_csv(dir / "b.csv", br, {0.0, 1.0, 2.0}, 5.0, 0.1);
  std::ifstream csv(dir / "b.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,delta,beta1,beta2,envelope");
  std::filesystem::remove_all(dir);
}
