#pragma once

#include <optional>
#include <string>

#include "boltzlab/cli/config.hpp"
#include "boltzlab/cli/experiments.hpp"

namespace boltzlab::cli {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct RunResult {
    int status = kExitPass;
    std::string out_dir;
    std::string error;
    Json manifest;
    ExperimentOutput output;
};

// --out, then BOLTZLAB_OUT, then the config's output_dir.
std::string resolve_output_dir(const std::optional<std::string>& flag, const RunConfig& cfg);

// Runs the experiment with the worker count from cfg.threads and writes
// config.json, every CSV and manifest.json into out_dir.
RunResult run(const RunConfig& cfg, const std::string& out_dir);

int cli_main(int argc, char** argv);

}  // namespace boltzlab::cli
