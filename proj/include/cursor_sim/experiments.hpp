#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cursor_sim/config.hpp"
#include "cursor_sim/machine.hpp"
#include "cursor_sim/output.hpp"

namespace csim {

inline constexpr const char* kToolVersion = "cursor-sim 1.0.0";
inline constexpr int kSchemaVersion = 1;

struct Plot {
    std::size_t table;
    std::string x;
    std::vector<std::string> ys;
};

struct RunResult {
    std::vector<Table> tables;
    std::vector<Plot> plots;
};

// Pure computation: builds and runs the experiment, returns its tables.
RunResult compute_experiment(const ExperimentConfig& cfg);

struct RunOptions {
    std::optional<std::string> out_dir;  // overrides the config
    std::optional<bool> svg;
    std::optional<std::uint64_t> seed;
    std::string config_path;
};

// Writes the CSV tables (plus SVG when requested) and manifest.txt; returns the written paths.
// On failure, every file written by this call is removed before the error propagates.
std::vector<std::string> run_experiment(ExperimentConfig cfg, const RunOptions& opts);

// Helpers shared with the tests ---------------------------------------------------------------

// Cursor state of the query-register construction: sites in M (subsets of 1..bits) are down,
// every other site up; amplitudes are the Fourier coefficients of f. One state per N3 sector.
struct SectorState {
    std::shared_ptr<const ExcitationBasis> basis;
    CVec amp;
};
std::vector<SectorState> dj_initial_state(const std::string& function, int bits, int s);
// Time average over the grid of |<in|psi(t)>|.
double dj_stationarity_score(const std::vector<SectorState>& in, double lambda, double t_max, double t_step,
                             std::vector<double>* series = nullptr);

// Slater determinant of chain eigenmodes k (ascending) over n3-subsets of 1..s.
CVec slater_state(const ExcitationBasis& basis, const std::vector<int>& modes);

}  // namespace csim
