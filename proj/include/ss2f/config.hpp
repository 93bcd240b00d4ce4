#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ss2f/estimate.hpp"
#include "ss2f/params.hpp"
#include "ss2f/simulate.hpp"

namespace ss2f {

/// Invalid configuration or unparseable input file. The CLI maps this to
/// exit code 1 (numerical failures map to 2).
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Command-line overrides that win over the config file.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> n_t;
    std::optional<int> contracts;
    std::optional<double> dt;
    std::optional<int> threads;
};

/// Full run configuration for the CLI commands. Defaults reproduce the
/// simulation study: truth (1.5, 1.0, -2.0, 1.3, 0.3, -0.7, s = 0.03),
/// five monthly contracts at constant times-to-maturity, dt = 1/360.
struct RunConfig {
    ParamVector theta = ParamVector::tied(1.5, 1.0, -2.0, 1.3, 0.3, -0.7, 0.0, 0.0, 0.03, 5);
    double dt = 1.0 / 360.0;
    int n_t = 2000;
    int contracts = 5;
    double spacing = 1.0 / 12.0;
    bool rolling = false;
    bool fixed_x0 = false;
    StateVec x0;
    std::uint64_t seed = 42;
    std::uint64_t stream = 0;
    std::string out_dir = "out";
    int threads = 0;  // 0 = hardware concurrency
    SearchBox box;
    OptimOptions optim;
    std::vector<int> sizes = {500, 1000, 2000, 4000};
    int replications = 10;

    SimConfig sim_config() const;
    StudyOptions study_options() const;
    RngSeed rng_seed() const { return {seed, stream}; }

    /// Throws ConfigError naming the offending field.
    void validate() const;
};

/// Loads a config file (JSON, all keys optional) and applies overrides.
/// With no file, starts from defaults. Unknown keys are rejected so typos
/// fail loudly.
RunConfig load_run_config(const std::optional<std::filesystem::path>& file,
                          const ConfigOverrides& overrides);

}  // namespace ss2f
