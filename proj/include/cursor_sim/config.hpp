#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csim {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    std::string name;
    std::string out_dir = "out";
    bool emit_svg = false;

    // [chain]
    int s = 0;
    double lambda = 2.0;
    int n3 = 1;
    double t_max = 0;  // 0: experiment default
    double t_step = 0;

    // [grover]
    int mu = 0;
    std::vector<int> target;

    // [trap]
    int delta = 0;
    double pulse_t0 = 0;
    double pulse_width = 1.0;
    bool double_trap = false;

    // [launchpad]
    std::string launch_kind = "flat";
    int launch_n = 0;
    int launch_k = 1;

    // [sampling]
    int paths = 0;
    double dt = 0;  // 0: automatic
    std::uint64_t seed = 0;
    double T = 0;
    std::vector<int> region;  // sites bounding the critical region (exclusive lower, inclusive upper)

    // [dj]
    std::string dj_function = "constant";
    int dj_bits = 2;

    std::vector<std::string> keys_set;  // "section.key", in file order
    bool has(const std::string& key) const;
};

struct ExperimentInfo {
    std::string name;
    std::string description;
    std::vector<std::string> required;  // "section.key"
    std::vector<std::string> outputs;   // file: columns
};

const std::vector<ExperimentInfo>& experiment_catalog();
const ExperimentInfo& experiment_info(const std::string& name);

// Errors carry "line N: ..." for syntax and value problems.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace csim
