// Wall-clock comparison of the OpenMP kernels against their serial
// references. Usage: bench_kernels [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#include "plap/attractor.hpp"
#include "plap/kernels.hpp"

using namespace plap;

namespace {

double seconds(int repeats, const std::function<void()>& f) {
  f();  // warm-up
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < repeats; ++r) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() /
         repeats;
}

volatile double sink = 0.0;

void row(const char* name, std::size_t n, double serial, double parallel) {
  std::printf("%-22s %10zu %12.3e %12.3e %8.2fx\n", name, n, serial, parallel,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::atoi(argv[1]) : 20;
  std::printf("threads: %d\n", omp_get_max_threads());
  std::printf("%-22s %10s %12s %12s %9s\n", "kernel", "nodes", "serial [s]", "openmp [s]",
              "speedup");

  for (const Grid& g : {make_grid(1, 8.0, 257), make_grid(2, 4.0, 257), make_grid(3, 2.0, 65)}) {
    Rng rng(1);
    std::uniform_real_distribution<double> wa(1.0, 50.0);
    std::vector<double> a(g.size());
    for (double& x : a) x = wa(rng);
    const State u = random_noise(g, rng), v = random_noise(g, rng);
    const auto w = g.weights();
    const auto st = g.stencil();
    std::vector<double> out(g.size());
    const std::size_t n = g.size();

    row("apply_operator", n,
        seconds(repeats, [&] { kernels::reference::apply_operator(st, a, u.values(), 4.0, out); }),
        seconds(repeats, [&] { kernels::apply_operator(st, a, u.values(), 4.0, out); }));
    row("weighted_pow_sum", n,
        seconds(repeats, [&] { sink = kernels::reference::weighted_pow_sum(w, a, u.values(), 3.5); }),
        seconds(repeats, [&] { sink = kernels::weighted_pow_sum(w, a, u.values(), 3.5); }));
    row("face_pow_sum", n,
        seconds(repeats, [&] { sink = kernels::reference::face_pow_sum(st, u.values(), 3.5); }),
        seconds(repeats, [&] { sink = kernels::face_pow_sum(st, u.values(), 3.5); }));
    row("weighted_dist_sq", n,
        seconds(repeats,
                [&] { sink = kernels::reference::weighted_dist_sq(w, u.values(), v.values()); }),
        seconds(repeats, [&] { sink = kernels::weighted_dist_sq(w, u.values(), v.values()); }));
  }

  {
    const Grid g = make_grid(1, 8.0, 257);
    Rng rng(2);
    std::vector<State> from, to;
    for (int k = 0; k < 64; ++k) from.push_back(random_noise(g, rng));
    for (int k = 0; k < 64; ++k) to.push_back(random_noise(g, rng));
    std::vector<std::span<const double>> f, t;
    for (auto& s : from) f.push_back(s.values());
    for (auto& s : to) t.push_back(s.values());
    row("max_min_distance", g.size(),
        seconds(repeats, [&] { sink = kernels::reference::max_min_distance(g.weights(), f, t); }),
        seconds(repeats, [&] { sink = kernels::max_min_distance(g.weights(), f, t); }));
  }

  {
    // Ensemble evolution: one thread versus the default team.
    const Grid g = make_grid(1, 8.0, 257);
    const Energy e{make_weight(g, {WeightBase::Polynomial, 6.0, WeightShift::Constant}, 0.0),
                   TheoryParams::make(4.0, 5)};
    const Forcing f(g, 1.0, {L1Profile::Kind::Ramp, 1.0, 0.1, -10.0, 10.0},
                    {Coupling::Kind::Sin, -1.0});
    const auto init = sample_ball(g, 10.0, 8, 1);
    const StepConfig step;
    const int saved = omp_get_max_threads();
    omp_set_num_threads(1);
    const double serial = seconds(1, [&] { evolve_ensemble(e, f, init, 0.0, 2.0, step); });
    omp_set_num_threads(saved);
    const double parallel = seconds(1, [&] { evolve_ensemble(e, f, init, 0.0, 2.0, step); });
    row("evolve_ensemble (8)", g.size(), serial, parallel);
  }
  return 0;
}
