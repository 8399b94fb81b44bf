#pragma once

#include <optional>
#include <utility>

#include "cursor_sim/machine.hpp"

namespace csim {

// Marginal probability of each cursor configuration.
RVec cursor_distribution(const MachineState& psi);
// Probability that each site 1..s is occupied (equals the distribution of Q when n3 = 1).
RVec site_occupancy(const MachineState& psi);
// Distribution of the i-th ordered position Q_i (1-based i), indexed by site 1..s.
RVec position_marginal(const MachineState& psi, int i);

CMat register_density(const MachineState& psi);
CMat cursor_density(const MachineState& psi);

struct BlochState {
    double s1 = 0, s2 = 0, s3 = 0;
    double r = 0;
    double gamma = 0;
    bool degenerate = false;
};

// s_j = tr(rho sigma_j); gamma from (s1, s3) = r (sin g, cos g), unwrapped against prev.
BlochState bloch_polar(const CMat& rho, const BlochState* prev = nullptr);
std::vector<BlochState> bloch_series(const std::vector<CMat>& rhos);

double von_neumann_entropy(const CMat& rho);
double entropy_from_radius(double r);

// Max over interior grid points of the Lindblad-equation defect for a one-qubit register.
double lindblad_residual(const std::vector<BlochState>& bloch, const std::vector<CMat>& rhos, double h);

struct MeasurementOutcome {
    double probability = 0;
    std::optional<MachineState> collapsed;
};

// Outcomes for P and 1 - P, P a projector on the register space.
std::vector<MeasurementOutcome> measure_projector(const MachineState& psi, const CMat& projector);

struct EnergyLevel {
    double energy;
    double probability;
};

std::vector<EnergyLevel> energy_distribution(const CVec& psi, const SpectralDecomposition& dec);

// Large-time approximation of r e^{i gamma} for the toy chain started at site 1.
cplx toy_bloch_approx(double t, double theta, double alpha, double lambda);

// Upper bound on the completion probability of an s-site chain with a delta-site identity tail.
double telomere_bound(int s, int delta);

double grover_success_probability(double t, int s, int mu, double lambda);

}  // namespace csim
