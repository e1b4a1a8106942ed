#include "plap/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>

#include "plap/error.hpp"

#ifndef PLAP_VERSION
#define PLAP_VERSION "0.0.0"
#endif

namespace plap {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

const char* version_string() { return PLAP_VERSION; }

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"simulate", "bounds", "attractor", "perturb",
                                              "sweep"};
  return names;
}

namespace {

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& header) : path_(path) {
    out_ = std::fopen(path.c_str(), "w");
    if (!out_) throw Error(ErrorKind::Io, "cannot write " + path.string());
    std::fprintf(out_, "%s\n", header.c_str());
  }
  ~CsvWriter() {
    if (out_) std::fclose(out_);
  }
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      std::fprintf(out_, first ? "%.17g" : ",%.17g", v);
      first = false;
    }
    std::fputc('\n', out_);
  }

 private:
  fs::path path_;
  std::FILE* out_ = nullptr;
};

void write_json(const fs::path& path, const ojson& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

struct Setup {
  Grid grid;
  WeightField w0;
  WeightField w;
  Energy e;
  Energy e0;
  Forcing f;
};

Setup make_setup(const RunConfig& cfg) {
  Grid g = cfg.make_grid();
  WeightField w0 = make_weight(g, cfg.weight.family, 0.0);
  WeightField w = make_weight(g, cfg.weight.family, cfg.weight.eps);
  Forcing f = cfg.make_forcing(g);
  return {g, w0, w, Energy{w, cfg.theory}, Energy{w0, cfg.theory}, f};
}

BoundsReport make_bounds(const RunConfig& cfg, const Setup& s) {
  BoundsOptions opts;
  opts.t_ref = cfg.run.t_ref;
  opts.eta = cfg.run.eta;
  return build_bounds(cfg.theory, embedding_constant(s.w0, cfg.theory), cfg.forcing.L,
                      cfg.forcing.l1, opts);
}

State initial_state(const RunConfig& cfg, const Grid& g) {
  if (cfg.initial.kind == InitialSpec::Kind::Zero || cfg.initial.radius == 0.0) return State(g);
  return sample_ball(g, cfg.initial.radius, 1, cfg.run.seed,
                     {cfg.pullback.modes, cfg.pullback.support_fraction})
      .front();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
  return out;
}

ExperimentResult simulate(const RunConfig& cfg, const fs::path& dir) {
  const Setup s = make_setup(cfg);
  const BoundsReport br = make_bounds(cfg, s);
  const State u0 = initial_state(cfg, s.grid);
  const Trajectory tr = evolve(s.e, s.f, u0, cfg.run.tau, cfg.run.t, cfg.step, false);
  write_trajectory_csv(dir / "trajectory.csv", tr);
  write_snapshot(dir / "final_state.txt", tr.final_state());

  // ½‖u‖² against β₁ once t − τ >= T1, ‖u‖_E^p against β₂ once t − τ >= T2.
  const double p = cfg.theory.p;
  double worst1 = 0.0, worst2 = 0.0;
  {
    CsvWriter csv(dir / "bounds_check.csv", "time,half_l2_sq,beta1,E_pow,beta2");
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
      const double t = tr.times[k];
      const double y1 = 0.5 * tr.monitors[k].l2_norm * tr.monitors[k].l2_norm;
      const double y2 = std::pow(tr.monitors[k].e_norm, p);
      const double b1 = br.beta1(t), b2 = br.beta2(t);
      csv.row({t, y1, b1, y2, b2});
      if (t - cfg.run.tau >= br.T1) worst1 = std::max(worst1, y1 / b1);
      if (t - cfg.run.tau >= br.T2) worst2 = std::max(worst2, y2 / b2);
    }
  }
  int max_iters = 0;
  for (const auto& m : tr.monitors) max_iters = std::max(max_iters, m.inner_iters);

  ExperimentResult r;
  r.outputs = {"trajectory.csv", "bounds_check.csv", "final_state.txt"};
  r.summary["steps"] = tr.times.size() - 1;
  r.summary["final_time"] = tr.final_time();
  r.summary["max_inner_iters"] = max_iters;
  r.summary["T1"] = br.T1;
  r.summary["T2"] = br.T2;
  r.summary["max_ratio_half_l2_sq_to_beta1"] = worst1;
  r.summary["max_ratio_E_pow_to_beta2"] = worst2;
  return r;
}

ExperimentResult bounds(const RunConfig& cfg, const fs::path& dir) {
  const Setup s = make_setup(cfg);
  const TheoryParams& tp = cfg.theory;
  const BoundsReport br = make_bounds(cfg, s);
  const Integrability integ = integrability(s.w0, tp);
  const double weight_gap = sup_distance(s.w, s.w0);
  const double tau = cfg.run.tau, t = cfg.run.t;
  const double M = apriori_perturbation_M(br, t);

  // Smallest lattice radius whose tail factor meets the tolerance.
  const double h = s.grid.spacing();
  const double r_max = s.grid.half_width() * std::sqrt(static_cast<double>(s.grid.dim()));
  std::optional<double> tail_radius;
  for (double R = h; R <= r_max; R += h) {
    if (std::pow(tail_mass(s.w0, tp, R), 1.0 / tp.theta_conj) <= cfg.run.tail_tolerance) {
      tail_radius = R;
      break;
    }
  }

  ojson j = bounds_to_json(br);
  j["integrability"] = integ.value;
  j["integrability_finite_on_rn"] = integ.finite_on_rn;
  j["tail_tolerance"] = cfg.run.tail_tolerance;
  j["tail_radius"] = tail_radius ? ojson(*tail_radius) : ojson();
  j["tail_factor_at_half_domain"] =
      std::pow(tail_mass(s.w0, tp, 0.5 * s.grid.half_width()), 1.0 / tp.theta_conj);
  j["eps"] = cfg.weight.eps;
  j["weight_gap"] = weight_gap;
  j["M_apriori"] = M;
  j["M_tilde_apriori"] = perturbation_constant(br.lipschitz, M, t, t - cfg.run.window);
  write_json(dir / "bounds.json", j);

  const auto ts = linspace(tau, t, cfg.run.curve_points);
  write_bounds_csv(dir / "bounds.csv", br, ts, M, weight_gap);

  // Comparison ODE for y = ‖u‖² from the initial radius, against the
  // closed-form decay bound for ½‖u‖².
  const double y0 = cfg.initial.kind == InitialSpec::Kind::Zero
                        ? 0.0
                        : cfg.initial.radius * cfg.initial.radius;
  const Curve ode = ode_decay_oracle(br.gamma, tp.theta, [&](double x) { return br.delta(x); },
                                     y0, tau, t - tau);
  int violations = 0;
  {
    CsvWriter csv(dir / "ode_oracle.csv", "t,half_y,decay_bound");
    std::size_t k = 0;
    for (double x : ts) {
      while (k + 1 < ode.t.size() && ode.t[k + 1] <= x) ++k;
      const double half_y = 0.5 * ode.y[k];
      const double bound = br.decay_bound(ode.t[k], tau);
      csv.row({ode.t[k], half_y, bound});
      if (half_y > bound) ++violations;
    }
  }

  ExperimentResult r;
  r.outputs = {"bounds.json", "bounds.csv", "ode_oracle.csv"};
  r.summary["eta"] = br.eta;
  r.summary["gamma"] = br.gamma;
  r.summary["ode_bound_violations"] = violations;
  return r;
}

ExperimentResult attractor(const RunConfig& cfg, const fs::path& dir) {
  const Setup s = make_setup(cfg);
  const PullbackConfig pc = cfg.pullback_config();
  const double t = cfg.run.t;

  const PullbackResult sec = pullback_section(s.e, s.f, t, pc, cfg.step);
  write_cloud(dir / "cloud", sec.cloud);
  {
    CsvWriter csv(dir / "certificates.csv", "depth,certificate");
    for (std::size_t k = 0; k < sec.certificates.size(); ++k) {
      csv.row({sec.depths_used[k + 1], sec.certificates[k]});
    }
  }

  const auto b0 = sample_ball(s.grid, pc.rho0, pc.m_samples, pc.seed + 1, pc.directions);
  const auto attraction = attraction_diagnostic(s.e, s.f, t, b0, pc.depths, cfg.step, sec.cloud);
  {
    CsvWriter csv(dir / "attraction.csv", "depth,dist_H");
    for (std::size_t k = 0; k < attraction.size(); ++k) csv.row({pc.depths[k], attraction[k]});
  }

  const double t_prev = t - cfg.pullback.delta_tau;
  const PullbackResult prev = pullback_section(s.e, s.f, t_prev, pc, cfg.step);
  write_cloud(dir / "cloud_prev", prev.cloud);
  const InvarianceReport inv = invariance_diagnostic(s.e, s.f, prev.cloud, sec.cloud, cfg.step);
  {
    CsvWriter csv(dir / "invariance.csv", "tau,t,forward,backward");
    csv.row({t_prev, t, inv.forward, inv.backward});
  }

  ExperimentResult r;
  r.outputs = {"cloud", "cloud_prev", "certificates.csv", "attraction.csv", "invariance.csv"};
  r.summary["converged"] = sec.converged;
  r.summary["depth_used"] = sec.cloud.provenance.depth;
  r.summary["attraction_last"] = attraction.back();
  r.summary["invariance_forward"] = inv.forward;
  r.summary["invariance_backward"] = inv.backward;
  return r;
}

ExperimentResult perturb(const RunConfig& cfg, const fs::path& dir) {
  const Setup s = make_setup(cfg);
  const BoundsReport br = make_bounds(cfg, s);
  const double t = cfg.run.t, tau = t - cfg.run.window;
  const State u0 = initial_state(cfg, s.grid);
  const GapCurve gap = process_gap(s.e, s.e0, s.f, u0, u0, tau, t, cfg.step);

  int violations = 0;
  {
    CsvWriter csv(dir / "gap.csv", "time,gap_sq,envelope");
    for (std::size_t k = 0; k < gap.times.size(); ++k) {
      csv.row({gap.times[k], gap.gap_sq[k], gap.envelope[k]});
      if (gap.gap_sq[k] > gap.envelope[k]) ++violations;
    }
  }
  PerturbationConstants pert;
  pert.M_measured = gap.M_measured;
  pert.M_apriori = apriori_perturbation_M(br, t);
  pert.M_tilde = perturbation_constant(br.lipschitz, gap.M_measured, t, tau);
  pert.window = cfg.run.window;
  ojson j = bounds_to_json(br, pert);
  j["eps"] = cfg.weight.eps;
  j["weight_gap"] = gap.weight_gap;
  j["gap0"] = gap.gap0;
  j["sup_gap_sq"] = gap.sup_gap_sq();
  j["envelope_end"] = gap.envelope.back();
  write_json(dir / "perturbation.json", j);

  ExperimentResult r;
  r.outputs = {"gap.csv", "perturbation.json"};
  r.summary["sup_gap_sq"] = gap.sup_gap_sq();
  r.summary["envelope_violations"] = violations;
  return r;
}

ExperimentResult sweep(const RunConfig& cfg, const fs::path& dir) {
  const Setup s = make_setup(cfg);
  SweepConfig sc;
  sc.eps_list = cfg.run.eps_list;
  sc.t = cfg.run.t;
  sc.window = cfg.run.window;
  sc.pullback = cfg.pullback_config();
  sc.step = cfg.step;
  const auto rows = usc_sweep(s.grid, cfg.weight.family, cfg.theory, s.f, sc);
  write_sweep_csv(dir / "sweep.csv", rows);

  bool all_converged = true;
  for (const auto& row : rows) all_converged = all_converged && row.converged;
  ExperimentResult r;
  r.outputs = {"sweep.csv"};
  r.summary["rows"] = rows.size();
  r.summary["all_converged"] = all_converged;
  r.summary["window"] = {sc.t - sc.window, sc.t};
  return r;
}

}  // namespace

ExperimentResult run_experiment(const std::string& name, RunConfig cfg, const fs::path& out_dir) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown experiment '" + name + "'");
  }
  if (!cfg.run.experiment.empty() && cfg.run.experiment != name) {
    throw Error(ErrorKind::InvalidArgument, "run.experiment: config selects '" +
                                                cfg.run.experiment + "' but the subcommand is '" +
                                                name + "'");
  }
  cfg.run.experiment = name;
  cfg.run.out_dir = out_dir.string();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + out_dir.string() + ": " + ec.message());

  ExperimentResult r;
  if (name == "simulate") {
    r = simulate(cfg, out_dir);
  } else if (name == "bounds") {
    r = bounds(cfg, out_dir);
  } else if (name == "attractor") {
    r = attractor(cfg, out_dir);
  } else if (name == "perturb") {
    r = perturb(cfg, out_dir);
  } else {
    r = sweep(cfg, out_dir);
  }

  {
    std::ofstream echo(out_dir / "manifest.ini");
    if (!echo) throw Error(ErrorKind::Io, "cannot write manifest.ini");
    echo << to_ini(cfg);
  }
  ojson m;
  m["version"] = version_string();
  m["experiment"] = name;
  m["seed"] = cfg.run.seed;
  m["config"] = "manifest.ini";
  m["outputs"] = r.outputs;
  m["warnings"] = cfg.warnings;
  m["summary"] = r.summary;
  write_json(out_dir / "manifest.json", m);
  return r;
}

}  // namespace plap
