#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "cursor_sim/machine.hpp"
#include "cursor_sim/peres.hpp"

namespace csim {

struct Hop {
    std::size_t to;
    double magnitude;  // |g|, g = -H(n, to)
    double phase;      // arg g
};

// Off-diagonal structure of a Hermitian operator over configurations.
struct HopGraph {
    std::vector<std::vector<Hop>> out;
    std::size_t size() const { return out.size(); }
};

HopGraph hop_graph(const HermitianOperator& h);
// Free cursor chain in the sector of `basis`; every hop moves one excitation by one site.
HopGraph hop_graph_free_chain(const ExcitationBasis& basis, double lambda);
HopGraph hop_graph_reduced(const ReducedHamiltonian& h);
// Throws unless every hop of the graph moves exactly one excitation to a neighboring site.
void check_nearest_neighbor(const HopGraph& hop, const ExcitationBasis& basis);

// Exact cursor wavefunction as a function of time.
using WaveSource = std::function<CVec(double)>;

struct RateTable {
    double t = 0;
    std::vector<std::vector<double>> rate;  // parallel to HopGraph::out
    double total(std::size_t n) const;
};

inline constexpr double kDensityFloor = 1e-12;

// a+(n -> m) = |g| sqrt(rho_m / rho_n) (1 + sin(S_m - S_n + arg g)); rho_n < floor emits nothing.
// With dt > 0 each rate is capped at 1e3 / dt.
RateTable forward_rates(const HopGraph& hop, const CVec& psi, double t = 0.0, double dt = 0.0);
// Out-rates of a single configuration.
std::vector<double> forward_rates_from(const HopGraph& hop, const CVec& psi, std::size_t n, double dt = 0.0);

// Master-equation generator G(m, n) = a+(n -> m), G(n, n) = -sum_m a+(n -> m).
RMat generator(const HopGraph& hop, const RateTable& rates);
// d rho / dt implied by the rates (net inflow per configuration).
RVec rate_drift(const HopGraph& hop, const RateTable& rates, const CVec& psi);
// d rho / dt from the Schrodinger equation, 2 Im(conj(psi_n) (H psi)_n).
RVec schrodinger_drift(const HermitianOperator& h, const CVec& psi);

// RK4 integration of dp/dt = G(t) p with rates from the exact wavefunction.
RVec integrate_master(const HopGraph& hop, const WaveSource& psi, const RVec& p0, double T, double dt);

struct TrajectoryPath {
    std::uint64_t seed = 0;
    std::uint64_t id = 0;
    double dt = 0;
    std::vector<double> t;
    std::vector<std::size_t> config;
};

struct SamplerOptions {
    double T = 1.0;
    double dt = 0.01;
    double max_step_probability = 0.05;
    int max_substeps = 1024;
    bool record = true;  // keep every grid sample; otherwise only the endpoints
};

class PathSampler {
public:
    PathSampler(HopGraph hop, WaveSource psi, SamplerOptions opts);

    const SamplerOptions& options() const { return opts_; }
    std::size_t steps() const { return steps_; }
    // Deterministic in (seed, id). Throws NumericsError when rate * dt needs more than max_substeps.
    TrajectoryPath sample(std::uint64_t seed, std::uint64_t id) const;
    // Samples paths id = first..first+n-1 on up to `threads` workers; results are ordered by id.
    std::vector<TrajectoryPath> sample_many(std::uint64_t seed, std::size_t first, std::size_t n,
                                            unsigned threads = 0) const;

private:
    HopGraph hop_;
    WaveSource psi_;
    SamplerOptions opts_;
    std::size_t steps_;
    RVec rho0_;
    std::vector<RateTable> mid_;  // rates at step midpoints
};

// Wave source and hop graph for a machine state: free cursor when the register is trivial, otherwise the
// Peres chain of a leveled graph (refuses non-leveled graphs, whose cursor marginal is not Peres form).
struct SamplerSetup {
    HopGraph hop;
    WaveSource psi;
    HermitianOperator hamiltonian;
    std::shared_ptr<const SpectralDecomposition> spectrum;
};
SamplerSetup sampler_setup(const ProgramGraph& graph, const MachineState& psi0, std::size_t max_levels = 4096);

struct SojournStats {
    std::vector<double> sojourn;  // per path
    double fraction_zero() const;
    // Empirical CDF at x (right-continuous).
    double cdf(double x) const;
};

SojournStats sojourn_statistics(const std::vector<TrajectoryPath>& paths, const std::function<bool(std::size_t)>& region);

unsigned worker_count(unsigned requested = 0);

}  // namespace csim
