#include "plap/attractor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "plap/bounds.hpp"
#include "plap/error.hpp"

namespace plap {

void Cloud::validate() const {
  if (states.empty()) throw Error(ErrorKind::EmptyCloud, "cloud has no members");
  for (const auto& s : states) {
    require_same_grid(s.grid(), states.front().grid());
    if (!s.is_finite()) throw Error(ErrorKind::InvalidArgument, "cloud member is not finite");
  }
}

double hausdorff_semidist(const std::vector<State>& a, const std::vector<State>& b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptyCloud, "Hausdorff semi-distance of an empty cloud");
  const Grid& g = a.front().grid();
  std::vector<std::span<const double>> va, vb;
  va.reserve(a.size());
  vb.reserve(b.size());
  for (const auto& s : a) {
    require_same_grid(s.grid(), g);
    va.push_back(s.values());
  }
  for (const auto& s : b) {
    require_same_grid(s.grid(), g);
    vb.push_back(s.values());
  }
  return kernels::max_min_distance(g.weights(), va, vb);
}

double hausdorff_semidist(const Cloud& a, const Cloud& b) {
  return hausdorff_semidist(a.states, b.states);
}

std::vector<double> PullbackConfig::linear_schedule(double delta_tau, int count) {
  std::vector<double> d;
  for (int k = 1; k <= count; ++k) d.push_back(k * delta_tau);
  return d;
}

void PullbackConfig::validate() const {
  if (m_samples < 2) throw Error(ErrorKind::InvalidArgument, "pullback needs m_samples >= 2");
  if (depths.empty()) throw Error(ErrorKind::InvalidArgument, "pullback depth schedule is empty");
  if (depths.front() < 0.0) throw Error(ErrorKind::InvalidArgument, "pullback depths must be >= 0");
  for (std::size_t k = 1; k < depths.size(); ++k) {
    if (!(depths[k] > depths[k - 1])) {
      throw Error(ErrorKind::InvalidArgument, "pullback depth schedule must be strictly increasing");
    }
  }
  if (!(rho0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "pullback radius rho0 must be > 0");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "pullback tolerance must be > 0");
}

std::vector<State> evolve_ensemble(const Energy& e, const Forcing& f,
                                   const std::vector<State>& initial, double tau, double t,
                                   const StepConfig& step) {
  const auto n = static_cast<std::ptrdiff_t>(initial.size());
  std::vector<std::optional<State>> finals(initial.size());
  std::vector<std::exception_ptr> errors(initial.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      Trajectory tr = evolve(e, f, initial[k], tau, t, step, false);
      finals[k] = tr.final_state();
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  std::vector<State> out;
  out.reserve(initial.size());
  for (auto& s : finals) {
    s->set_time_tag(t);
    out.push_back(std::move(*s));
  }
  return out;
}

namespace {

std::vector<State> push_forward(const Energy& e, const Forcing& f,
                                const std::vector<State>& initial, double depth, double t,
                                const StepConfig& step) {
  if (depth == 0.0) {
    std::vector<State> out = initial;
    for (auto& s : out) s.set_time_tag(t);
    return out;
  }
  return evolve_ensemble(e, f, initial, t - depth, t, step);
}

}  // namespace

PullbackResult pullback_section(const Energy& e, const Forcing& f, double t,
                                const PullbackConfig& cfg, const StepConfig& step) {
  cfg.validate();
  const std::vector<State> samples =
      sample_ball(e.grid(), cfg.rho0, cfg.m_samples, cfg.seed, cfg.directions);

  PullbackResult res;
  std::optional<std::vector<State>> prev;
  std::vector<State> cur;
  for (double depth : cfg.depths) {
    cur = push_forward(e, f, samples, depth, t, step);
    res.depths_used.push_back(depth);
    if (prev) {
      const double cert = hausdorff_semidist(*prev, cur);
      res.certificates.push_back(cert);
      if (cert < cfg.tol) {
        res.converged = true;
        break;
      }
    }
    prev = cur;
  }
  res.cloud.states = std::move(cur);
  res.cloud.time_tag = t;
  res.cloud.provenance = {e.weight.eps(), res.depths_used.back(), cfg.seed};
  return res;
}

std::vector<double> attraction_diagnostic(const Energy& e, const Forcing& f, double t,
                                          const std::vector<State>& b0,
                                          const std::vector<double>& depths,
                                          const StepConfig& step, const Cloud& attractor) {
  attractor.validate();
  std::vector<double> out;
  out.reserve(depths.size());
  for (double depth : depths) {
    out.push_back(hausdorff_semidist(push_forward(e, f, b0, depth, t, step), attractor.states));
  }
  return out;
}

InvarianceReport invariance_diagnostic(const Energy& e, const Forcing& f,
                                       const Cloud& section_tau, const Cloud& section_t,
                                       const StepConfig& step) {
  section_tau.validate();
  section_t.validate();
  if (!(section_t.time_tag >= section_tau.time_tag)) {
    throw Error(ErrorKind::InvalidArgument, "invariance diagnostic needs tau <= t");
  }
  const auto moved =
      evolve_ensemble(e, f, section_tau.states, section_tau.time_tag, section_t.time_tag, step);
  return {hausdorff_semidist(moved, section_t.states),
          hausdorff_semidist(section_t.states, moved)};
}

double GapCurve::sup_gap_sq() const {
  return gap_sq.empty() ? 0.0 : *std::max_element(gap_sq.begin(), gap_sq.end());
}

GapCurve process_gap(const Energy& e_eps, const Energy& e_0, const Forcing& f,
                     const State& u_tau_eps, const State& u_tau_0, double tau, double t,
                     const StepConfig& step) {
  require_same_grid(e_eps.grid(), e_0.grid());
  if (!(t >= tau)) throw Error(ErrorKind::InvalidArgument, "process_gap needs t >= tau");
  step.validate(f.lipschitz());
  const double p = e_0.p();

  GapCurve gc;
  gc.weight_gap = sup_distance(e_eps.weight, e_0.weight);
  auto coupling_term = [p](const State& u0, const State& ue) {
    const double n0 = norm_lp(u0, p);
    return std::pow(n0, p) + std::pow(n0, p - 1.0) * norm_lp(ue, p);
  };

  State ue = u_tau_eps;
  State u0 = u_tau_0;
  const auto n_steps =
      static_cast<std::size_t>(std::max(0.0, std::ceil((t - tau) / step.dt - 1e-9)));
  gc.times.push_back(step_time(tau, 0, step.dt));
  gc.gap_sq.push_back(kernels::weighted_dist_sq(ue.grid().weights(), ue.values(), u0.values()));
  gc.gap0 = gc.gap_sq.front();
  double M = coupling_term(u0, ue);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double s = step_time(tau, k, step.dt);
    ue = prox_step(e_eps, f, ue, s, step).state;
    u0 = prox_step(e_0, f, u0, s, step).state;
    gc.times.push_back(step_time(tau, k + 1, step.dt));
    gc.gap_sq.push_back(kernels::weighted_dist_sq(ue.grid().weights(), ue.values(), u0.values()));
    M = std::max(M, coupling_term(u0, ue));
  }
  gc.M_measured = M;
  gc.envelope.reserve(gc.times.size());
  for (double s : gc.times) {
    gc.envelope.push_back(
        perturbation_envelope(f.lipschitz(), M, s, tau, gc.gap0, gc.weight_gap));
  }
  return gc;
}

std::vector<SweepRow> usc_sweep(const Grid& grid, const WeightFamily& family,
                                const TheoryParams& tp, const Forcing& f,
                                const SweepConfig& cfg) {
  for (std::size_t k = 0; k < cfg.eps_list.size(); ++k) {
    const double eps = cfg.eps_list[k];
    if (!(eps > 0.0 && eps <= 1.0)) {
      throw Error(ErrorKind::OutOfRange, "sweep eps values must lie in (0, 1]");
    }
    if (k > 0 && !(eps < cfg.eps_list[k - 1])) {
      throw Error(ErrorKind::InvalidArgument, "sweep eps values must be strictly decreasing");
    }
  }
  if (!(cfg.window >= 0.0)) throw Error(ErrorKind::InvalidArgument, "sweep window must be >= 0");

  const Energy e0{make_weight(grid, family, 0.0), tp};
  const PullbackResult base = pullback_section(e0, f, cfg.t, cfg.pullback, cfg.step);
  // Common initial datum for the gap runs over the compact window.
  const State u_tau = sample_ball(grid, cfg.pullback.rho0, 1, cfg.pullback.seed,
                                  cfg.pullback.directions)
                          .front();
  const double tau = cfg.t - cfg.window;

  std::vector<SweepRow> rows;
  for (double eps : cfg.eps_list) {
    const Energy ee{make_weight(grid, family, eps), tp};
    const PullbackResult sec = pullback_section(ee, f, cfg.t, cfg.pullback, cfg.step);
    const GapCurve gap = process_gap(ee, e0, f, u_tau, u_tau, tau, cfg.t, cfg.step);
    rows.push_back({eps, hausdorff_semidist(sec.cloud, base.cloud), gap.sup_gap_sq(),
                    gap.envelope.back(), sec.cloud.provenance.depth, sec.converged});
  }
  const GapCurve gap0 = process_gap(e0, e0, f, u_tau, u_tau, tau, cfg.t, cfg.step);
  rows.push_back({0.0, hausdorff_semidist(base.cloud, base.cloud), gap0.sup_gap_sq(),
                  gap0.envelope.back(), base.cloud.provenance.depth, base.converged});
  return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  std::fprintf(out, "eps,dist_H_to_A0,sup_gap_sq,envelope,depth_used,converged_flag\n");
  for (const auto& r : rows) {
    std::fprintf(out, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", r.eps, r.dist_to_a0, r.sup_gap_sq,
                 r.envelope, r.depth_used, r.converged ? 1 : 0);
  }
  std::fclose(out);
}

void write_cloud(const std::filesystem::path& dir, const Cloud& cloud) {
  cloud.validate();
  std::filesystem::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["time_tag"] = cloud.time_tag;
  manifest["eps"] = cloud.provenance.eps;
  manifest["seed"] = cloud.provenance.seed;
  manifest["depth"] = cloud.provenance.depth;
  auto files = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < cloud.states.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "state_%03zu.txt", i);
    write_snapshot(dir / name, cloud.states[i]);
    files.push_back(name);
  }
  manifest["states"] = files;
  std::ofstream out(dir / "manifest.json");
  if (!out) throw Error(ErrorKind::Io, "cannot write cloud manifest in " + dir.string());
  out << manifest.dump(2) << '\n';
}

Cloud read_cloud(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw Error(ErrorKind::Io, "cannot read cloud manifest in " + dir.string());
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::Parse, dir.string() + "/manifest.json: " + ex.what());
  }
  Cloud c;
  c.time_tag = manifest.at("time_tag").get<double>();
  c.provenance.eps = manifest.at("eps").get<double>();
  c.provenance.seed = manifest.at("seed").get<std::uint64_t>();
  c.provenance.depth = manifest.at("depth").get<double>();
  for (const auto& name : manifest.at("states")) {
    c.states.push_back(read_snapshot(dir / name.get<std::string>()));
  }
  c.validate();
  return c;
}

}  // namespace plap
