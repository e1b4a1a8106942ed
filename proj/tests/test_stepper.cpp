#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "plap/error.hpp"
#include "support.hpp"

using namespace plap;

TEST_CASE("step configuration is validated") {
  StepConfig c;
  CHECK_NOTHROW(c.validate(1.0));
  c.dt = 1.0;
  try {
    c.validate(1.0);
    FAIL("expected rejection");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::StepRejected);
  }
  c = StepConfig{};
  c.tol_inner = 1e-2;
  CHECK_THROWS(c.validate(1.0));
  c = StepConfig{};
  c.dt = -1e-3;
  CHECK_THROWS(c.validate(1.0));
}

TEST_CASE("zero is a fixed point of the unforced step") {
  const Grid g = support::desk_grid();
  const auto r = prox_step(support::desk_energy(g), support::zero_forcing(g), State(g), 0.0, {});
  CHECK(norm_l2(r.state) == 0.0);
}

TEST_CASE("unforced proximal steps dissipate") {
  const Grid g = support::desk_grid();
  const Energy e = support::desk_energy(g, 0.2);
  const Forcing f = support::zero_forcing(g);
  const StepConfig cfg;
  Rng rng(1);
  for (int k = 0; k < 40; ++k) {
    const State u = support::random_state(g, rng, 0.1, 10.0);
    const auto r = prox_step(e, f, u, 0.0, cfg);
    CHECK(r.residual <= cfg.tol_inner * (1.0 + norm_l2(u)));
    const double phi = energy(e, u), phi_next = energy(e, r.state);
    CHECK(phi_next <= phi);
    CHECK(norm_l2(r.state) <= norm_l2(u));
    const double d = norm_l2(r.state - u);
    CHECK(0.5 * d * d + cfg.dt * phi_next <= cfg.dt * phi * (1.0 + 1e-12));
  }
}

TEST_CASE("resolvent is nonexpansive") {
  const Grid g = support::desk_grid();
  const Energy e = support::desk_energy(g);
  const Forcing f = support::zero_forcing(g);
  const StepConfig cfg;
  Rng rng(2);
  for (int k = 0; k < 40; ++k) {
    const State u = support::random_state(g, rng), v = support::random_state(g, rng);
    const auto ru = prox_step(e, f, u, 0.0, cfg);
    const auto rv = prox_step(e, f, v, 0.0, cfg);
    CHECK(norm_l2(ru.state - rv.state) <= norm_l2(u - v) + ru.residual + rv.residual);
  }
}

TEST_CASE("inner solver reports nonconvergence") {
  const Grid g = support::desk_grid();
  const Energy e = support::desk_energy(g);
  Rng rng(3);
  const State z = 20.0 * random_noise(g, rng);
  try {
    solve_resolvent(e, z, 1e-2, z, 1e-12, 2);
    FAIL("expected nonconvergence");
  } catch (const NonConvergenceError& err) {
    CHECK(err.kind() == ErrorKind::NonConvergence);
    CHECK(err.iterations() == 2);
    CHECK(err.residual() > 0.0);
  }
}

TEST_CASE("one step is consistent to second order") {
  const Grid g = make_grid(1, 8.0, 129);
  const Energy e = support::desk_energy(g);
  const Forcing f = support::desk_forcing(g);
  const State u = State::sample(g, [](auto x) { return 0.3 * std::exp(-x[0] * x[0]); });
  std::vector<double> err;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    StepConfig cfg;
    cfg.dt = dt;
    cfg.tol_inner = 1e-13;
    const State next = prox_step(e, f, u, 0.0, cfg).state;
    const State euler = u + dt * (eval_B(f, 0.0, u) - apply_A(e, u));
    err.push_back(norm_l2(next - euler));
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  MESSAGE("Richardson ratios " << r1 << ", " << r2);
  CHECK(r1 == doctest::Approx(4.0).epsilon(0.15));
  CHECK(r2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("evolve as a process") {
  const Grid g = support::desk_grid();
  const Energy e = support::desk_energy(g);
  const Forcing f = support::desk_forcing(g);
  const StepConfig cfg;
  Rng rng(4);
  const State u = support::random_state(g, rng, 1.0, 10.0);

  const Trajectory id = evolve(e, f, u, 1.0, 1.0, cfg);
  REQUIRE(id.times.size() == 1);
  CHECK(norm_l2(id.final_state() - u) == 0.0);

  const Trajectory whole = evolve(e, f, u, 0.0, 1.0, cfg);
  const Trajectory first = evolve(e, f, u, 0.0, 0.4, cfg);
  const Trajectory second = evolve(e, f, first.final_state(), first.final_time(), 1.0, cfg);
  CHECK(second.final_time() == doctest::Approx(whole.final_time()).epsilon(1e-14));
  for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(second.final_state()[i] == whole.final_state()[i]);

  REQUIRE(whole.times.size() == 101);
  for (std::size_t k = 1; k < whole.times.size(); ++k) {
    CHECK(whole.times[k] - whole.times[k - 1] == doctest::Approx(cfg.dt).epsilon(1e-9));
  }
  for (const auto& m : whole.monitors) {
    CHECK(std::isfinite(m.l2_norm));
    CHECK(std::isfinite(m.e_norm));
    CHECK(std::isfinite(m.energy));
  }
  CHECK(whole.final_state().satisfies_dirichlet());

  const Trajectory odd = evolve(e, f, u, 0.0, 0.125, cfg, false);
  CHECK(odd.times.size() == 14);
  CHECK(odd.final_time() == doctest::Approx(0.13).epsilon(1e-12));
  CHECK(odd.states.empty());
}

TEST_CASE("difference of two solutions grows at most like e^{L(t − τ)}") {
  const Grid g = support::desk_grid();
  const Energy e = support::desk_energy(g);
  const Forcing f(g, 1.0, {L1Profile::Kind::Ramp, 1.0, 0.1, -10.0, 10.0},
                  {Coupling::Kind::Sin, 1.0});
  const StepConfig cfg;
  Rng rng(5);
  for (int k = 0; k < 5; ++k) {
    const State u = support::random_state(g, rng, 0.5, 5.0), v = support::random_state(g, rng, 0.5, 5.0);
    const Trajectory a = evolve(e, f, u, 0.0, 2.0, cfg), b = evolve(e, f, v, 0.0, 2.0, cfg);
    for (std::size_t j = 0; j < a.times.size(); j += 10) {
      const double bound = std::exp(a.times[j]) * norm_l2(u - v);
      CHECK(norm_l2(a.states[j] - b.states[j]) <= bound * (1.0 + 1e-6) + 1e-6);
    }
  }
}

TEST_CASE("trajectory CSV") {
  const Grid g = make_grid(1, 2.0, 17);
  const Energy e = support::desk_energy(g);
  const Trajectory tr = evolve(e, support::zero_forcing(g), State(g), 0.0, 0.05, {});
  const auto path = std::filesystem::temp_directory_path() / "plap_traj_test.csv";
  write_trajectory_csv(path, tr);
  std::ifstream in(path);
  std::string header, row;
  std::getline(in, header);
  CHECK(header == "step,time,l2_norm,E_norm,energy,inner_residual,inner_iters");
  int rows = 0;
  while (std::getline(in, row)) ++rows;
  CHECK(rows == 6);
  for (const auto& m : tr.monitors) {
    CHECK(m.l2_norm == 0.0);
    CHECK(m.e_norm == 0.0);
    CHECK(m.energy == 0.0);
  }
  std::filesystem::remove(path);
}
