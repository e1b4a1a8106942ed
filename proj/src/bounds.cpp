#include "plap/bounds.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <fstream>
#include <sstream>

#include "plap/error.hpp"

namespace plap {

double BoundsReport::gamma_at(double e) const {
  return c_coerc - (std::pow(e, tp.theta) / tp.theta + std::pow(e, tp.p) / tp.p);
}

double BoundsReport::delta_at(double e, double t) const {
  return std::pow(lipschitz / e, tp.theta_conj) / tp.theta_conj +
         std::pow(l1(t) / e, tp.p_conj) / tp.p_conj;
}

double BoundsReport::beta1(double t) const {
  return std::pow(delta(t) / gamma, 2.0 / tp.p) + 1.0;
}

double BoundsReport::transient(double elapsed) const {
  if (!(elapsed > 0.0)) return std::numeric_limits<double>::infinity();
  return std::pow(0.5 * gamma * (tp.p - 2.0) * elapsed, -2.0 / (tp.p - 2.0));
}

double BoundsReport::decay_bound(double t, double tau) const {
  return std::pow(delta(t) / gamma, 2.0 / tp.p) + transient(t - tau);
}

double BoundsReport::a2(double t) const {
  const double R = R_window;
  const double l1r = l1(t + R);
  return R * tp.p / tp.theta_conj * std::pow(lipschitz, 2.0 * tp.theta_conj) +
         R * tp.p * l1r * l1r;
}

double BoundsReport::a3(double t) const {
  const double R = R_window;
  const double b1r = beta1(t + R);
  return 0.5 * beta1(t) + R * lipschitz * b1r + R * l1(t + R) * std::sqrt(b1r);
}

double BoundsReport::beta2(double t) const {
  return (a3(t) / R_window + a2(t)) * std::exp(a1);
}

namespace {

// Largest η with γ(η) > 0; γ is strictly decreasing on (0, ∞).
double eta_upper(const BoundsReport& br) {
  double lo = 0.0, hi = 1.0;
  while (br.gamma_at(hi) > 0.0) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (br.gamma_at(mid) > 0.0 ? lo : hi) = mid;
  }
  return lo;
}

double golden_section(const std::function<double(double)>& f, double a, double b) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 300 && (b - a) > 1e-14 * (std::fabs(a) + std::fabs(b)); ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

std::string gamma_curve_text(const BoundsReport& br) {
  std::ostringstream os;
  os << "gamma(eta):";
  for (double e : {0.01, 0.05, 0.1, 0.25, 0.5, 1.0}) os << " [" << e << ": " << br.gamma_at(e) << "]";
  return os.str();
}

}  // namespace

BoundsReport build_bounds(const TheoryParams& tp, double c_embed, double lipschitz,
                          const L1Profile& l1, const BoundsOptions& opts) {
  if (!(lipschitz > 0.0)) throw Error(ErrorKind::InvalidArgument, "bounds need L > 0");
  if (!(c_embed >= 1.0)) throw Error(ErrorKind::InvalidArgument, "bounds need c_embed >= 1");

  BoundsReport br;
  br.tp = tp;
  br.c_embed = c_embed;
  br.c_coerc = std::pow(c_embed, -tp.p / 2.0);
  br.lipschitz = lipschitz;
  br.l1 = l1;
  br.t_ref = opts.t_ref;

  if (opts.eta) {
    br.eta = *opts.eta;
    if (!(br.eta > 0.0) || !(br.gamma_at(br.eta) > 0.0)) {
      throw Error(ErrorKind::NoFeasibleEta,
                  "eta = " + std::to_string(br.eta) + " leaves gamma <= 0; " +
                      gamma_curve_text(br));
    }
  } else {
    const double hi = eta_upper(br);
    if (!(hi > 0.0)) {
      throw Error(ErrorKind::NoFeasibleEta, "no eta > 0 gives gamma > 0; " + gamma_curve_text(br));
    }
    auto objective = [&](double e) {
      const double g = br.gamma_at(e);
      return std::pow(br.delta_at(e, opts.t_ref) / g, 2.0 / tp.p);
    };
    br.eta = golden_section(objective, 1e-9 * hi, hi * (1.0 - 1e-9));
  }
  br.gamma = br.gamma_at(br.eta);
  br.T1 = 2.0 / (br.gamma * (tp.p - 2.0));
  br.T2 = 2.0 * br.T1;
  br.R_window = br.T1;
  br.a1 = br.R_window * tp.p / tp.theta;
  return br;
}

Curve ode_decay_oracle(double gamma, double theta,
                       const std::function<double(double)>& delta, double y0,
                       double tau, double horizon, double max_step) {
  if (!(gamma > 0.0) || !(theta > 1.0) || !(y0 >= 0.0) || !(horizon >= 0.0)) {
    throw Error(ErrorKind::InvalidArgument,
                "ode oracle needs gamma > 0, theta > 1, y0 >= 0, horizon >= 0");
  }
  auto rhs = [&](double t, double y) {
    return 2.0 * (delta(t) - gamma * std::pow(std::max(y, 0.0), theta));
  };
  Curve c;
  double t = tau, y = y0;
  const double t_end = tau + horizon;
  c.t.push_back(t);
  c.y.push_back(y);
  while (t < t_end) {
    const double stiff = 2.0 * gamma * theta * std::pow(std::max(y, 1e-300), theta - 1.0);
    double h = std::min(max_step, 0.05 / stiff);
    if (t + h > t_end) h = t_end - t;
    const double k1 = rhs(t, y);
    const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
    const double k4 = rhs(t + h, y + h * k3);
    y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    y = std::max(y, 0.0);
    t += h;
    if (!std::isfinite(y) || y > 1e300) {
      throw Error(ErrorKind::NonConvergence, "comparison ODE blew up at t = " + std::to_string(t));
    }
    c.t.push_back(t);
    c.y.push_back(y);
  }
  return c;
}

GronwallCheck uniform_gronwall_oracle(double a1, double a2, double a3, double R,
                                      const std::vector<double>& y) {
  GronwallCheck out;
  out.bound = (a3 / R + a2) * std::exp(a1);
  const double last = y.empty() ? 0.0 : y.back();
  out.margin = out.bound - last;
  out.holds = last <= out.bound;
  return out;
}

double perturbation_envelope(double lipschitz, double M, double t, double tau,
                             double gap0, double weight_gap) {
  const double s = t - tau;
  return (gap0 + 2.0 * M * s * weight_gap) * std::exp(2.0 * lipschitz * s);
}

double perturbation_constant(double lipschitz, double M, double t, double tau) {
  const double s = t - tau;
  return std::max(1.0, 2.0 * M * s) * std::exp(2.0 * lipschitz * s);
}

double apriori_perturbation_M(const BoundsReport& br, double t) {
  return 2.0 * br.beta2(t);
}

nlohmann::ordered_json bounds_to_json(const BoundsReport& br,
                                      const std::optional<PerturbationConstants>& pert) {
  nlohmann::ordered_json j;
  j["p"] = br.tp.p;
  j["n_theory"] = br.tp.n_theory;
  j["theta"] = br.tp.theta;
  j["theta_conj"] = br.tp.theta_conj;
  j["p_conj"] = br.tp.p_conj;
  j["p_star"] = br.tp.p_star ? nlohmann::ordered_json(*br.tp.p_star) : nlohmann::ordered_json();
  j["exponent_range_ok"] = br.tp.exponent_range_ok();
  j["c_embed"] = br.c_embed;
  j["c_coerc"] = br.c_coerc;
  j["L"] = br.lipschitz;
  j["l1"] = {{"kind", to_string(br.l1.kind)},
             {"b0", br.l1.b0},
             {"b1", br.l1.b1},
             {"t0", br.l1.t0},
             {"t_cap", br.l1.t_cap}};
  j["t_ref"] = br.t_ref;
  j["eta"] = br.eta;
  j["gamma"] = br.gamma;
  j["T1"] = br.T1;
  j["T2"] = br.T2;
  j["R_window"] = br.R_window;
  j["a1"] = br.a1;
  j["delta_t_ref"] = br.delta(br.t_ref);
  j["beta1_t_ref"] = br.beta1(br.t_ref);
  j["a2_t_ref"] = br.a2(br.t_ref);
  j["a3_t_ref"] = br.a3(br.t_ref);
  j["beta2_t_ref"] = br.beta2(br.t_ref);
  if (pert) {
    j["M_measured"] = pert->M_measured;
    j["M_apriori"] = pert->M_apriori;
    j["M_tilde"] = pert->M_tilde;
    j["perturbation_window"] = pert->window;
  }
  return j;
}

void write_bounds_json(const std::filesystem::path& path, const BoundsReport& br,
                       const std::optional<PerturbationConstants>& pert) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << bounds_to_json(br, pert).dump(2) << '\n';
}

void write_bounds_csv(const std::filesystem::path& path, const BoundsReport& br,
                      const std::vector<double>& ts, double M, double weight_gap) {
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  std::fprintf(out, "t,delta,beta1,beta2,envelope\n");
  const double tau = ts.empty() ? 0.0 : ts.front();
  for (double t : ts) {
    std::fprintf(out, "%.17g,%.17g,%.17g,%.17g,%.17g\n", t, br.delta(t), br.beta1(t),
                 br.beta2(t), perturbation_envelope(br.lipschitz, M, t, tau, 0.0, weight_gap));
  }
  std::fclose(out);
}

}  // namespace plap
