#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plap/error.hpp"
#include "plap/experiments.hpp"

namespace {

enum Exit { kOk = 0, kParse = 2, kInvariant = 3, kNonConvergence = 4, kIo = 5, kInternal = 70 };

int exit_code(plap::ErrorKind kind) {
  switch (kind) {
    case plap::ErrorKind::Parse: return kParse;
    case plap::ErrorKind::NonConvergence: return kNonConvergence;
    case plap::ErrorKind::Io: return kIo;
    default: return kInvariant;
  }
}

int report(const char* kind, int code, const std::string& message) {
  nlohmann::ordered_json j;
  j["status"] = "error";
  j["kind"] = kind;
  j["exit_code"] = code;
  j["message"] = message;
  std::cerr << j.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weighted p-Laplacian evolution lab"};
  app.set_version_flag("--version", plap::version_string());
  app.require_subcommand(1);

  std::string experiment, config_path, out_dir;
  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("experiment", experiment, "simulate | bounds | attractor | perturb | sweep")
      ->required()
      ->check(CLI::IsMember(plap::experiment_names()));
  run->add_option("config", config_path, "key = value config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides PLAP_OUT_DIR and run.out_dir)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report("parse-error", kParse, e.what());
  }

  try {
    plap::RunConfig cfg = plap::load_config(config_path);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    std::string dir = cfg.run.out_dir;
    if (const char* env = std::getenv("PLAP_OUT_DIR"); env && *env) dir = env;
    if (!out_dir.empty()) dir = out_dir;
    const auto result = plap::run_experiment(experiment, cfg, dir);
    nlohmann::ordered_json j;
    j["status"] = "ok";
    j["experiment"] = experiment;
    j["out_dir"] = dir;
    j["summary"] = result.summary;
    std::cout << j.dump() << '\n';
    return kOk;
  } catch (const plap::Error& e) {
    return report(plap::to_string(e.kind()), exit_code(e.kind()), e.what());
  } catch (const std::exception& e) {
    return report("internal-error", kInternal, e.what());
  }
}
