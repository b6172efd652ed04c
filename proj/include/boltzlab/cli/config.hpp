#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "boltzlab/grid.hpp"
#include "boltzlab/io.hpp"

namespace boltzlab::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::vector<std::string>& command_names();

struct RunConfig {
    std::string command;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string output_dir = "out";
    Json grid;     // completed grid block
    Json params;   // completed command block (named after the command)
    // Full effective document, echoed into the output directory.
    Json effective() const;
};

// Strict parse: unknown keys, wrong types, out-of-range values and rule
// violations raise ConfigError naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig parse_config(const Json& doc);

PhaseGrid grid_from(const Json& grid);

// Levenshtein distance, used for "did you mean" suggestions.
int edit_distance(const std::string& a, const std::string& b);

}  // namespace boltzlab::cli
