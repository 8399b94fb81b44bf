#include "cursor_sim/peres.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace csim {

PeresBasis build_peres_basis(const ProgramGraph& graph, const MachineState& psi1, std::size_t max_len,
                             double tol) {
    if (!psi1.basis) throw ModelError("initial state has no excitation basis");
    if (std::abs(psi1.norm() - 1.0) > 1e-10) throw ModelError("initial Peres state must be normalized");
    if (!(psi1.reg == graph.reg)) throw ModelError("initial state register does not match graph");
    const SparseC f = forward_operator(graph, *psi1.basis);
    const SparseC fa = f.adjoint();
    const double half = 0.5 * graph.lambda;

    PeresBasis pb;
    pb.lambda = graph.lambda;
    pb.states.push_back(psi1.amp);
    while (pb.states.size() < max_len) {
        const CVec& cur = pb.states.back();
        CVec next = f * cur;
        const double n = next.norm();
        if (n < 1e-12) break;
        next /= n;
        const std::size_t idx = pb.states.size() + 1;
        for (std::size_t j = 0; j < pb.states.size(); ++j) {
            const double ov = std::abs(pb.states[j].dot(next));
            if (ov > tol)
                throw NonLeveledGraph("non-leveled graph: successor " + std::to_string(idx) +
                                          " overlaps state " + std::to_string(j + 1) + " (|<.|.>| = " +
                                          std::to_string(ov) + ")",
                                      idx);
        }
        const CVec back = fa * next;
        if ((back - n * cur).norm() > tol * std::max(1.0, n))
            throw NonLeveledGraph("non-leveled graph: backward image of successor " + std::to_string(idx) +
                                      " is not its predecessor",
                                  idx);
        pb.weights.push_back(half * n);
        pb.states.push_back(std::move(next));
    }
    return pb;
}

RMat ReducedHamiltonian::dense() const {
    const Eigen::Index n = diag.size();
    RMat m = RMat::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag(i);
    for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off(i);
    return m;
}

ReducedHamiltonian reduced_hamiltonian(const PeresBasis& basis) {
    ReducedHamiltonian h;
    const Eigen::Index p = static_cast<Eigen::Index>(basis.size());
    h.diag = RVec::Zero(p);
    h.off = RVec::Zero(std::max<Eigen::Index>(p - 1, 0));
    for (Eigen::Index k = 0; k + 1 < p; ++k) h.off(k) = -basis.weights[k];
    return h;
}

CVec reduced_evolution(const ReducedHamiltonian& h, double t) {
    const SpectralDecomposition dec = eigh_tridiagonal(h.diag, h.off);
    CVec e1 = CVec::Zero(static_cast<Eigen::Index>(h.size()));
    if (e1.size() > 0) e1(0) = 1.0;
    return evolve_spectral(dec, e1, t);
}

cplx chain_amplitude(double t, int x, int s, double lambda) {
    if (x < 1 || x > s) throw ModelError("site out of range in chain amplitude");
    const double w = kPi / (s + 1);
    cplx acc = 0.0;
    for (int k = 1; k <= s; ++k)
        acc += std::exp(kI * (lambda * t * std::cos(k * w))) * (std::sin(k * w) * std::sin(k * w * x));
    return acc * (2.0 / (s + 1));
}

namespace {

cplx ipow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

double bessel_signed(int n, double x) {
    if (n >= 0) return bessel_j(n, x);
    return (n % 2 == 0 ? 1.0 : -1.0) * bessel_j(-n, x);
}

}  // namespace

cplx bessel_amplitude(double t, int x, int x0, double lambda) {
    if (x < 1 || x0 < 1) throw ModelError("sites must be >= 1");
    const double z = lambda * t;
    // J_n(-z) = (-1)^n J_n(z) keeps negative times well defined.
    const double sgn = z < 0 ? -1.0 : 1.0;
    auto J = [&](int n) { return bessel_signed(n, std::abs(z)) * ((sgn < 0 && (std::abs(n) % 2)) ? -1.0 : 1.0); };
    return ipow(x - x0) * J(x - x0) - ipow(x + x0) * J(x + x0);
}

namespace {

std::mutex g_cache_mutex;
std::map<std::string, std::shared_ptr<const SpectralDecomposition>> g_cache;

}  // namespace

std::shared_ptr<const SpectralDecomposition> cached_spectrum(const ProgramGraph& graph, const ExcitationBasis& basis) {
    const std::string key = graph_to_text(graph) + "#n3=" + std::to_string(basis.excitations());
    {
        std::lock_guard<std::mutex> lock(g_cache_mutex);
        auto it = g_cache.find(key);
        if (it != g_cache.end()) return it->second;
    }
    auto dec = std::make_shared<const SpectralDecomposition>(eigh(assemble_hamiltonian(graph, basis)));
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    if (g_cache.size() > 64) g_cache.clear();
    return g_cache.emplace(key, dec).first->second;
}

Propagator::Propagator(const ProgramGraph& graph, std::shared_ptr<const ExcitationBasis> basis)
    : basis_(std::move(basis)), reg_(graph.reg), dec_(cached_spectrum(graph, *basis_)) {}

MachineState Propagator::evolve(const MachineState& psi0, double t) const {
    if (psi0.dim() != dec_->dim()) throw ModelError("state does not live in the propagator's space");
    MachineState out = psi0;
    out.amp = evolve_spectral(*dec_, psi0.amp, t);
    return out;
}

MachineState propagate(const ProgramGraph& graph, const MachineState& psi0, double t) {
    if (!(psi0.reg == graph.reg)) throw ModelError("state register does not match graph");
    return Propagator(graph, psi0.basis).evolve(psi0, t);
}

PulsedPropagator::PulsedPropagator(const ProgramGraph& graph, const Pulse& pulse, const MachineState& psi0)
    : pulse_(pulse), psi0_(psi0) {
    if (!(pulse.width > 0)) throw ModelError("pulse width must be positive");
    if (pulse.target.role != Role::Control) throw ModelError("pulse target must be a control qubit");
    if (!graph.reg.has(pulse.target)) throw ModelError("pulse target missing from register");
    if (window_start() < 0) throw ModelError("pulse window starts before t = 0");
    free_ = cached_spectrum(graph, *psi0.basis);
    CMat h = assemble_hamiltonian(graph, *psi0.basis).dense();
    const CMat kick = embed(graph.reg, pulse.target, sigma(1)) * (0.5 * pulse.amplitude / pulse.width);
    const Eigen::Index rd = static_cast<Eigen::Index>(graph.reg.dim());
    for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(psi0.basis->size()); ++c)
        h.block(c * rd, c * rd, rd, rd) += kick;
    kicked_ = eigh(h);
    before_ = evolve_spectral(*free_, psi0.amp, window_start());
    after_ = evolve_spectral(kicked_, before_, pulse.width);
}

MachineState PulsedPropagator::at(double t) const {
    MachineState out = psi0_;
    if (t <= window_start()) out.amp = evolve_spectral(*free_, psi0_.amp, t);
    else if (t <= window_end()) out.amp = evolve_spectral(kicked_, before_, t - window_start());
    else out.amp = evolve_spectral(*free_, after_, t - window_end());
    return out;
}

MachineState propagate_pulsed(const ProgramGraph& graph, const Pulse& pulse, const MachineState& psi0, double t) {
    if (pulse.t0 - 0.5 * pulse.width < 0 || pulse.t0 + 0.5 * pulse.width > t)
        throw ModelError("pulse window lies outside [0, t]");
    return PulsedPropagator(graph, pulse, psi0).at(t);
}

}  // namespace csim
