#pragma once

#include <string>
#include <utility>
#include <vector>

#include "boltzlab/cli/config.hpp"
#include "boltzlab/grid.hpp"
#include "boltzlab/io.hpp"

namespace boltzlab::cli {

struct Assertion {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double limit = 0.0;
    std::string detail;
    bool informational = false;   // reported, but does not affect the exit status
};

struct ExperimentOutput {
    std::vector<Assertion> assertions;
    std::vector<std::pair<std::string, std::string>> files;   // name -> CSV text
    Json summary = Json::object();
    bool all_pass() const;
};

ExperimentOutput run_experiment(const RunConfig& cfg);

// Data generators shared with the tests.
DensityField bump_field(const PhaseGrid& grid);
double smooth_value(const double* z, int d, bool inhomogeneous);
DensityField smooth_field(const PhaseGrid& grid);
DensityField random_positive_field(const PhaseGrid& grid, std::uint64_t seed, int index);
DensityField perturbed_maxwellian(const PhaseGrid& grid, double eps);

// Counter-based uniform and normal deviates, identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    double uniform();   // [0, 1)
    double normal();
private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace boltzlab::cli
