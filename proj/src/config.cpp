#include "plap/config.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "plap/error.hpp"

namespace plap {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void fail(ErrorKind kind, const std::string& path, const std::string& msg) {
  throw Error(kind, path + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& path, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    fail(ErrorKind::Parse, path, "expected a real number, got '" + raw + "'");
  }
  return v;
}

long long to_integer(const std::string& path, const std::string& raw) {
  const std::string s = trim(raw);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
    fail(ErrorKind::Parse, path, "expected an integer, got '" + raw + "'");
  }
  return v;
}

int to_int(const std::string& path, const std::string& raw) {
  const long long v = to_integer(path, raw);
  if (v < -2147483647LL || v > 2147483647LL) fail(ErrorKind::Parse, path, "integer out of range");
  return static_cast<int>(v);
}

std::vector<double> to_list(const std::string& path, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(path, item));
  if (out.empty()) fail(ErrorKind::Parse, path, "expected a comma-separated list of reals");
  return out;
}

template <class F>
auto parse_enum(const std::string& path, const std::string& raw, F parse) {
  try {
    return parse(trim(raw));
  } catch (const Error& e) {
    fail(ErrorKind::Parse, path, e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using Setter = std::function<void(const std::string& path, const std::string& value)>;
using Table = std::map<std::string, std::map<std::string, Setter>>;

Table make_table(RunConfig& c, double& p, int& n, std::optional<double>& q) {
  Table t;
  t["grid"]["dim"] = [&](auto& k, auto& v) { c.grid.dim = to_int(k, v); };
  t["grid"]["half_width"] = [&](auto& k, auto& v) { c.grid.half_width = to_double(k, v); };
  t["grid"]["points"] = [&](auto& k, auto& v) { c.grid.points = to_int(k, v); };

  t["theory"]["p"] = [&](auto& k, auto& v) { p = to_double(k, v); };
  t["theory"]["n"] = [&](auto& k, auto& v) { n = to_int(k, v); };

  t["weight"]["base"] = [&](auto& k, auto& v) {
    c.weight.family.base = parse_enum(k, v, parse_weight_base);
  };
  t["weight"]["q"] = [&](auto& k, auto& v) { q = to_double(k, v); };
  t["weight"]["shift"] = [&](auto& k, auto& v) {
    c.weight.family.shift = parse_enum(k, v, parse_weight_shift);
  };
  t["weight"]["eps"] = [&](auto& k, auto& v) { c.weight.eps = to_double(k, v); };

  t["forcing"]["L"] = [&](auto& k, auto& v) { c.forcing.L = to_double(k, v); };
  t["forcing"]["l1"] = [&](auto& k, auto& v) { c.forcing.l1.kind = parse_enum(k, v, parse_l1_kind); };
  t["forcing"]["b0"] = [&](auto& k, auto& v) { c.forcing.l1.b0 = to_double(k, v); };
  t["forcing"]["b1"] = [&](auto& k, auto& v) { c.forcing.l1.b1 = to_double(k, v); };
  t["forcing"]["t0"] = [&](auto& k, auto& v) { c.forcing.l1.t0 = to_double(k, v); };
  t["forcing"]["t_cap"] = [&](auto& k, auto& v) { c.forcing.l1.t_cap = to_double(k, v); };
  t["forcing"]["coupling"] = [&](auto& k, auto& v) {
    c.forcing.coupling.kind = parse_enum(k, v, parse_coupling_kind);
  };
  t["forcing"]["sign"] = [&](auto& k, auto& v) { c.forcing.coupling.sign = to_double(k, v); };
  t["forcing"]["profile_width"] = [&](auto& k, auto& v) { c.forcing.profile_width = to_double(k, v); };

  t["step"]["dt"] = [&](auto& k, auto& v) { c.step.dt = to_double(k, v); };
  t["step"]["tol_inner"] = [&](auto& k, auto& v) { c.step.tol_inner = to_double(k, v); };
  t["step"]["max_inner_iters"] = [&](auto& k, auto& v) { c.step.max_inner_iters = to_int(k, v); };

  t["pullback"]["rho0"] = [&](auto& k, auto& v) { c.pullback.rho0 = to_double(k, v); };
  t["pullback"]["samples"] = [&](auto& k, auto& v) { c.pullback.samples = to_int(k, v); };
  t["pullback"]["delta_tau"] = [&](auto& k, auto& v) { c.pullback.delta_tau = to_double(k, v); };
  t["pullback"]["depth_count"] = [&](auto& k, auto& v) { c.pullback.depth_count = to_int(k, v); };
  t["pullback"]["tol"] = [&](auto& k, auto& v) { c.pullback.tol = to_double(k, v); };
  t["pullback"]["modes"] = [&](auto& k, auto& v) { c.pullback.modes = to_int(k, v); };
  t["pullback"]["support_fraction"] = [&](auto& k, auto& v) {
    c.pullback.support_fraction = to_double(k, v);
  };

  t["initial"]["kind"] = [&](auto& k, auto& v) {
    const std::string s = trim(v);
    if (s == "zero") {
      c.initial.kind = InitialSpec::Kind::Zero;
    } else if (s == "ball") {
      c.initial.kind = InitialSpec::Kind::Ball;
    } else {
      fail(ErrorKind::Parse, k, "expected 'zero' or 'ball', got '" + v + "'");
    }
  };
  t["initial"]["radius"] = [&](auto& k, auto& v) { c.initial.radius = to_double(k, v); };

  t["run"]["experiment"] = [&](auto&, auto& v) { c.run.experiment = trim(v); };
  t["run"]["seed"] = [&](auto& k, auto& v) {
    const long long s = to_integer(k, v);
    if (s < 0) fail(ErrorKind::Parse, k, "seed must be a nonnegative integer");
    c.run.seed = static_cast<std::uint64_t>(s);
  };
  t["run"]["out_dir"] = [&](auto&, auto& v) { c.run.out_dir = trim(v); };
  t["run"]["tau"] = [&](auto& k, auto& v) { c.run.tau = to_double(k, v); };
  t["run"]["t"] = [&](auto& k, auto& v) { c.run.t = to_double(k, v); };
  t["run"]["window"] = [&](auto& k, auto& v) { c.run.window = to_double(k, v); };
  t["run"]["t_ref"] = [&](auto& k, auto& v) { c.run.t_ref = to_double(k, v); };
  t["run"]["eta"] = [&](auto& k, auto& v) {
    if (trim(v) == "auto") {
      c.run.eta.reset();
    } else {
      c.run.eta = to_double(k, v);
    }
  };
  t["run"]["eps_list"] = [&](auto& k, auto& v) { c.run.eps_list = to_list(k, v); };
  t["run"]["tail_tolerance"] = [&](auto& k, auto& v) { c.run.tail_tolerance = to_double(k, v); };
  t["run"]["curve_points"] = [&](auto& k, auto& v) { c.run.curve_points = to_int(k, v); };
  return t;
}

// Re-raises a module error with the field path in front.
template <class F>
void checked(const std::string& path, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    fail(e.kind(), path, e.what());
  }
}

void validate(RunConfig& c) {
  const auto& g = c.grid;
  if (g.dim < 1 || g.dim > 3) fail(ErrorKind::InvalidDimension, "grid.dim", "must be 1, 2 or 3");
  if (g.points < 3) fail(ErrorKind::TooFewPoints, "grid.points", "must be >= 3");
  if (!(g.half_width > 0.0)) fail(ErrorKind::InvalidArgument, "grid.half_width", "must be > 0");

  if (!(c.weight.family.q > 0.0)) fail(ErrorKind::InvalidArgument, "weight.q", "must be > 0");
  if (!(c.weight.eps >= 0.0 && c.weight.eps <= 1.0)) {
    fail(ErrorKind::OutOfRange, "weight.eps", "must lie in [0, 1]");
  }

  const auto& f = c.forcing;
  if (!(f.L > 0.0)) fail(ErrorKind::InvalidArgument, "forcing.L", "must be > 0");
  if (!(f.l1.b0 >= 0.0)) fail(ErrorKind::InvalidArgument, "forcing.b0", "must be >= 0");
  if (!(f.l1.b1 >= 0.0)) fail(ErrorKind::InvalidArgument, "forcing.b1", "must be >= 0");
  if (f.coupling.sign != 1.0 && f.coupling.sign != -1.0) {
    fail(ErrorKind::InvalidArgument, "forcing.sign", "must be 1 or -1");
  }
  if (!(f.profile_width > 0.0)) {
    fail(ErrorKind::InvalidArgument, "forcing.profile_width", "must be > 0");
  }

  if (c.step.max_inner_iters < 1) {
    fail(ErrorKind::InvalidArgument, "step.max_inner_iters", "must be >= 1");
  }
  checked("step", [&] { c.step.validate(f.L); });

  const auto& pb = c.pullback;
  if (!(pb.rho0 > 0.0)) fail(ErrorKind::InvalidArgument, "pullback.rho0", "must be > 0");
  if (pb.samples < 2) fail(ErrorKind::InvalidArgument, "pullback.samples", "must be >= 2");
  if (!(pb.delta_tau > 0.0)) fail(ErrorKind::InvalidArgument, "pullback.delta_tau", "must be > 0");
  if (pb.depth_count < 1) fail(ErrorKind::InvalidArgument, "pullback.depth_count", "must be >= 1");
  if (!(pb.tol > 0.0)) fail(ErrorKind::InvalidArgument, "pullback.tol", "must be > 0");
  if (pb.modes < 1) fail(ErrorKind::InvalidArgument, "pullback.modes", "must be >= 1");
  if (!(pb.support_fraction > 0.0 && pb.support_fraction <= 1.0)) {
    fail(ErrorKind::OutOfRange, "pullback.support_fraction", "must lie in (0, 1]");
  }

  if (!(c.initial.radius >= 0.0)) fail(ErrorKind::InvalidArgument, "initial.radius", "must be >= 0");

  auto& r = c.run;
  if (!r.experiment.empty() && r.experiment != "simulate" && r.experiment != "bounds" &&
      r.experiment != "attractor" && r.experiment != "perturb" && r.experiment != "sweep") {
    fail(ErrorKind::Parse, "run.experiment", "unknown experiment '" + r.experiment + "'");
  }
  if (!(r.t >= r.tau)) fail(ErrorKind::InvalidArgument, "run.t", "must be >= run.tau");
  if (!(r.window >= 0.0)) fail(ErrorKind::InvalidArgument, "run.window", "must be >= 0");
  if (r.eta && !(*r.eta > 0.0)) fail(ErrorKind::InvalidArgument, "run.eta", "must be > 0 or 'auto'");
  for (std::size_t k = 0; k < r.eps_list.size(); ++k) {
    if (!(r.eps_list[k] > 0.0 && r.eps_list[k] <= 1.0)) {
      fail(ErrorKind::OutOfRange, "run.eps_list", "values must lie in (0, 1]");
    }
    if (k > 0 && !(r.eps_list[k] < r.eps_list[k - 1])) {
      fail(ErrorKind::InvalidArgument, "run.eps_list", "values must be strictly decreasing");
    }
  }
  if (!(r.tail_tolerance > 0.0)) {
    fail(ErrorKind::InvalidArgument, "run.tail_tolerance", "must be > 0");
  }
  if (r.curve_points < 2) fail(ErrorKind::InvalidArgument, "run.curve_points", "must be >= 2");

  checked("grid", [&] { (void)c.make_grid(); });

  if (!c.theory.exponent_range_ok()) {
    c.warnings.push_back("theory: 2 < p < n violated (p = " + fmt(c.theory.p) +
                         ", n = " + std::to_string(c.theory.n_theory) + ")");
  }
  if (c.weight.family.base == WeightBase::Constant) {
    c.warnings.push_back("weight.base: constant weight does not satisfy the integrability "
                         "condition on the whole space");
  } else if (!(2.0 * c.weight.family.q / (c.theory.p - 2.0) > c.theory.n_theory)) {
    c.warnings.push_back("weight.q: 2q/(p - 2) <= n, integrability condition fails on the "
                         "whole space");
  }
}

}  // namespace

Grid RunConfig::make_grid() const {
  return Grid::make(grid.dim, grid.half_width, static_cast<std::size_t>(grid.points));
}

Forcing RunConfig::make_forcing(const Grid& g) const {
  return Forcing(g, forcing.L, forcing.l1, forcing.coupling, forcing.profile_width);
}

PullbackConfig RunConfig::pullback_config() const {
  PullbackConfig pc;
  pc.rho0 = pullback.rho0;
  pc.m_samples = pullback.samples;
  pc.depths = PullbackConfig::linear_schedule(pullback.delta_tau, pullback.depth_count);
  pc.tol = pullback.tol;
  pc.seed = run.seed;
  pc.directions = {pullback.modes, pullback.support_fraction};
  return pc;
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorKind::Parse, source + ": " + e.message() + " (line " +
                                      std::to_string(e.line()) + ")");
  }

  RunConfig c;
  double p = c.theory.p;
  int n = c.theory.n_theory;
  std::optional<double> q;
  Table table = make_table(c, p, n, q);

  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      fail(ErrorKind::Parse, section, "key outside of any section");
    }
    auto sec = table.find(section);
    if (sec == table.end()) fail(ErrorKind::Parse, section, "unknown section");
    for (const auto& [key, node] : body) {
      auto it = sec->second.find(key);
      if (it == sec->second.end()) fail(ErrorKind::Parse, section + "." + key, "unknown key");
      it->second(section + "." + key, node.data());
    }
  }

  if (!(p > 2.0)) fail(ErrorKind::InvalidArgument, "theory.p", "must be > 2 (got " + fmt(p) + ")");
  if (n < 1) fail(ErrorKind::InvalidArgument, "theory.n", "must be >= 1");
  c.theory = TheoryParams::make(p, n);
  c.weight.family.q = q ? *q : default_growth_exponent(c.theory);
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, path.string() + ": cannot open config file");
  return parse_config(in, path.string());
}

std::string to_ini(const RunConfig& c) {
  std::ostringstream os;
  os << "[grid]\n"
     << "dim = " << c.grid.dim << "\n"
     << "half_width = " << fmt(c.grid.half_width) << "\n"
     << "points = " << c.grid.points << "\n\n"
     << "[theory]\n"
     << "p = " << fmt(c.theory.p) << "\n"
     << "n = " << c.theory.n_theory << "\n\n"
     << "[weight]\n"
     << "base = " << to_string(c.weight.family.base) << "\n"
     << "q = " << fmt(c.weight.family.q) << "\n"
     << "shift = " << to_string(c.weight.family.shift) << "\n"
     << "eps = " << fmt(c.weight.eps) << "\n\n"
     << "[forcing]\n"
     << "L = " << fmt(c.forcing.L) << "\n"
     << "l1 = " << to_string(c.forcing.l1.kind) << "\n"
     << "b0 = " << fmt(c.forcing.l1.b0) << "\n"
     << "b1 = " << fmt(c.forcing.l1.b1) << "\n"
     << "t0 = " << fmt(c.forcing.l1.t0) << "\n"
     << "t_cap = " << fmt(c.forcing.l1.t_cap) << "\n"
     << "coupling = " << to_string(c.forcing.coupling.kind) << "\n"
     << "sign = " << fmt(c.forcing.coupling.sign) << "\n"
     << "profile_width = " << fmt(c.forcing.profile_width) << "\n\n"
     << "[step]\n"
     << "dt = " << fmt(c.step.dt) << "\n"
     << "tol_inner = " << fmt(c.step.tol_inner) << "\n"
     << "max_inner_iters = " << c.step.max_inner_iters << "\n\n"
     << "[pullback]\n"
     << "rho0 = " << fmt(c.pullback.rho0) << "\n"
     << "samples = " << c.pullback.samples << "\n"
     << "delta_tau = " << fmt(c.pullback.delta_tau) << "\n"
     << "depth_count = " << c.pullback.depth_count << "\n"
     << "tol = " << fmt(c.pullback.tol) << "\n"
     << "modes = " << c.pullback.modes << "\n"
     << "support_fraction = " << fmt(c.pullback.support_fraction) << "\n\n"
     << "[initial]\n"
     << "kind = " << (c.initial.kind == InitialSpec::Kind::Zero ? "zero" : "ball") << "\n"
     << "radius = " << fmt(c.initial.radius) << "\n\n"
     << "[run]\n";
  if (!c.run.experiment.empty()) os << "experiment = " << c.run.experiment << "\n";
  os << "seed = " << c.run.seed << "\n"
     << "out_dir = " << c.run.out_dir << "\n"
     << "tau = " << fmt(c.run.tau) << "\n"
     << "t = " << fmt(c.run.t) << "\n"
     << "window = " << fmt(c.run.window) << "\n"
     << "t_ref = " << fmt(c.run.t_ref) << "\n"
     << "eta = " << (c.run.eta ? fmt(*c.run.eta) : std::string("auto")) << "\n"
     << "eps_list = ";
  for (std::size_t k = 0; k < c.run.eps_list.size(); ++k) {
    os << (k ? ", " : "") << fmt(c.run.eps_list[k]);
  }
  os << "\n"
     << "tail_tolerance = " << fmt(c.run.tail_tolerance) << "\n"
     << "curve_points = " << c.run.curve_points << "\n";
  return os.str();
}

}  // namespace plap
