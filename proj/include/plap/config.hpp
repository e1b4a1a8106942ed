#pragma once

// Run configuration: an INI-style key = value file with one section per
// module ([grid], [theory], [weight], [forcing], [step], [pullback],
// [initial], [run]). Every key is optional; unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "plap/attractor.hpp"
#include "plap/bounds.hpp"

namespace plap {

struct GridSpec {
  int dim = 1;
  double half_width = 8.0;
  int points = 257;
};

struct WeightSpec {
  WeightFamily family{WeightBase::Polynomial, 6.0, WeightShift::Constant};
  double eps = 0.0;
};

struct ForcingSpec {
  double L = 1.0;
  L1Profile l1{L1Profile::Kind::Ramp, 1.0, 0.1, -10.0, 10.0};
  Coupling coupling;
  double profile_width = 1.0;
};

struct PullbackSpec {
  double rho0 = 10.0;
  int samples = 8;
  double delta_tau = 2.0;
  int depth_count = 10;
  double tol = 1e-4;
  int modes = 8;
  double support_fraction = 0.5;
};

struct InitialSpec {
  enum class Kind { Zero, Ball };
  Kind kind = Kind::Ball;
  double radius = 10.0;
};

struct RunSpec {
  std::string experiment;        // empty: taken from the subcommand
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  double tau = -15.0;            // simulate / bounds curve start
  double t = 5.0;                // section time, simulate / curve end
  double window = 10.0;          // perturb / sweep gap window [t − window, t]
  double t_ref = 0.0;
  std::optional<double> eta;
  std::vector<double> eps_list{0.4, 0.2, 0.1, 0.05, 0.025};
  double tail_tolerance = 1e-6;
  int curve_points = 201;
};

struct RunConfig {
  GridSpec grid;
  TheoryParams theory = TheoryParams::make(4.0, 5);
  WeightSpec weight;
  ForcingSpec forcing;
  StepConfig step;
  PullbackSpec pullback;
  InitialSpec initial;
  RunSpec run;
  std::vector<std::string> warnings;

  Grid make_grid() const;
  Forcing make_forcing(const Grid& grid) const;
  PullbackConfig pullback_config() const;
};

// Throws Error(Parse) for syntax, unknown keys and unconvertible values, and
// Error(InvalidArgument / OutOfRange / StepRejected) for values that break an
// invariant. Messages start with the offending field path, e.g. "theory.p".
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

// Canonical echo with every resolved value (17 significant digits); parsing
// it yields the same configuration.
std::string to_ini(const RunConfig& cfg);

}  // namespace plap
