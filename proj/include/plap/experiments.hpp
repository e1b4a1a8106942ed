#pragma once

// The five experiments behind the command-line subcommands. Each writes its
// artifacts into an output directory together with manifest.ini (the fully
// resolved configuration; rerunning it reproduces every CSV) and
// manifest.json (version, seed, experiment, file list, summary).

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "plap/config.hpp"

namespace plap {

const char* version_string();

const std::vector<std::string>& experiment_names();

struct ExperimentResult {
  std::vector<std::string> outputs;  // relative to the output directory
  nlohmann::ordered_json summary;
};

// Throws InvalidArgument when `name` is unknown or disagrees with
// cfg.run.experiment; module errors propagate unchanged.
ExperimentResult run_experiment(const std::string& name, RunConfig cfg,
                                const std::filesystem::path& out_dir);

}  // namespace plap
