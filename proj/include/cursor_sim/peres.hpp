#pragma once

#include <memory>

#include "cursor_sim/machine.hpp"

namespace csim {

struct NonLeveledGraph : ModelError {
    NonLeveledGraph(const std::string& what, std::size_t idx) : ModelError(what), index(idx) {}
    std::size_t index;  // 1-based index of the offending successor
};

struct PeresBasis {
    std::vector<CVec> states;    // psi_1 .. psi_p
    std::vector<double> weights; // w_k = ||H_forward psi_k||, k = 1 .. p-1
    double lambda = 2.0;
    std::size_t size() const { return states.size(); }
};

// psi_{k+1} ~ H_forward psi_k; stops when the weight drops below 1e-12 or max_len is reached.
// Throws NonLeveledGraph if a successor is not orthogonal to its predecessors or the backward
// half does not map it onto the previous state.
PeresBasis build_peres_basis(const ProgramGraph& graph, const MachineState& psi1, std::size_t max_len,
                             double tol = 1e-10);

struct ReducedHamiltonian {
    RVec diag;  // zero
    RVec off;   // off(k) = <psi_{k+2}|H|psi_{k+1}> (0-based k)
    std::size_t size() const { return static_cast<std::size_t>(diag.size()); }
    RMat dense() const;
};

ReducedHamiltonian reduced_hamiltonian(const PeresBasis& basis);

// Coefficients of the Peres states at time t, starting from psi_1.
CVec reduced_evolution(const ReducedHamiltonian& h, double t);

// Closed-form chain amplitude starting from site 1.
cplx chain_amplitude(double t, int x, int s, double lambda);
// Semi-infinite limit: i^{x-x0} J_{x-x0}(lambda t) - i^{x+x0} J_{x+x0}(lambda t).
cplx bessel_amplitude(double t, int x, int x0, double lambda);

// Dense spectral propagator for one graph and excitation sector.
class Propagator {
public:
    Propagator(const ProgramGraph& graph, std::shared_ptr<const ExcitationBasis> basis);
    const SpectralDecomposition& spectrum() const { return *dec_; }
    const std::shared_ptr<const ExcitationBasis>& basis() const { return basis_; }
    const RegisterSpec& reg() const { return reg_; }
    MachineState evolve(const MachineState& psi0, double t) const;

private:
    std::shared_ptr<const ExcitationBasis> basis_;
    RegisterSpec reg_;
    std::shared_ptr<const SpectralDecomposition> dec_;
};

// Memoised spectral decomposition per (graph text, sector); safe for concurrent readers.
std::shared_ptr<const SpectralDecomposition> cached_spectrum(const ProgramGraph& graph, const ExcitationBasis& basis);

MachineState propagate(const ProgramGraph& graph, const MachineState& psi0, double t);

struct Pulse {
    double t0 = 0.0;
    double width = 1.0;
    double amplitude = kPi;  // rotation angle delivered over the window
    QubitRef target = QubitRef::control(1);
};

// Piecewise-constant propagation: H, then H + (amplitude/width) rho1/2 inside the window, then H.
class PulsedPropagator {
public:
    PulsedPropagator(const ProgramGraph& graph, const Pulse& pulse, const MachineState& psi0);
    MachineState at(double t) const;
    double window_start() const { return pulse_.t0 - 0.5 * pulse_.width; }
    double window_end() const { return pulse_.t0 + 0.5 * pulse_.width; }

private:
    Pulse pulse_;
    MachineState psi0_;
    std::shared_ptr<const SpectralDecomposition> free_;
    SpectralDecomposition kicked_;
    CVec before_;  // state at window start
    CVec after_;   // state at window end
};

MachineState propagate_pulsed(const ProgramGraph& graph, const Pulse& pulse, const MachineState& psi0, double t);

}  // namespace csim
