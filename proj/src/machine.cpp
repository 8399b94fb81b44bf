#include "cursor_sim/machine.hpp"

#include <algorithm>

namespace csim {

ExcitationBasis::ExcitationBasis(int s, int k) : s_(s), k_(k) {
    if (s < 1) throw ModelError("chain needs at least one site");
    if (k < 0 || k > s) throw ModelError("excitation count must lie in [0, s]");
    binom_.assign(s + 1, std::vector<std::size_t>(s + 1, 0));
    for (int n = 0; n <= s; ++n) {
        binom_[n][0] = 1;
        for (int r = 1; r <= n; ++r) binom_[n][r] = binom_[n - 1][r - 1] + (r <= n - 1 ? binom_[n - 1][r] : 0);
    }
    const std::size_t total = binom(s, k);
    configs_.reserve(total);
    std::vector<int> c(k);
    for (int i = 0; i < k; ++i) c[i] = i + 1;
    for (std::size_t n = 0; n < total; ++n) {
        configs_.push_back(c);
        int i = k - 1;
        while (i >= 0 && c[i] == s - k + i + 1) --i;
        if (i < 0) break;
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
    }
}

std::size_t ExcitationBasis::binom(int n, int r) const {
    if (n < 0 || r < 0 || r > n) return 0;
    return binom_[n][r];
}

std::size_t ExcitationBasis::rank(const std::vector<int>& subset) const {
    if (static_cast<int>(subset.size()) != k_) throw ModelError("subset size does not match sector");
    // rank = C(s,k) - 1 - sum_i C(s - c_i, k - i)   (c_i 1-based, i = 1..k)
    std::size_t acc = 0;
    int prev = 0;
    for (int i = 0; i < k_; ++i) {
        const int c = subset[i];
        if (c <= prev || c > s_) throw ModelError("subset must be strictly increasing within 1..s");
        acc += binom(s_ - c, k_ - i);
        prev = c;
    }
    return binom(s_, k_) - 1 - acc;
}

std::vector<int> ExcitationBasis::unrank(std::size_t index) const {
    if (index >= size()) throw ModelError("config index out of range");
    std::vector<int> out(k_);
    std::size_t remaining = index;
    int next = 1;
    for (int i = 0; i < k_; ++i) {
        for (int c = next;; ++c) {
            const std::size_t block = binom(s_ - c, k_ - i - 1);  // subsets starting with c here
            if (remaining < block) {
                out[i] = c;
                next = c + 1;
                break;
            }
            remaining -= block;
        }
    }
    return out;
}

void ProgramGraph::add_edge(int from, int to, Primitive op) { edges.push_back({from, to, std::move(op)}); }

void ProgramGraph::validate() const {
    if (sites < 1) throw ModelError("graph needs at least one site");
    for (const auto& e : edges) {
        if (e.from == e.to) throw ModelError("self-loop at site " + std::to_string(e.from));
        if (e.from < 1 || e.from > sites || e.to < 1 || e.to > sites)
            throw ModelError("edge " + std::to_string(e.from) + "->" + std::to_string(e.to) + " out of range");
        if (e.op.kind == PrimitiveKind::Custom && static_cast<std::size_t>(e.op.custom.rows()) != reg.dim())
            throw ModelError("custom primitive dimension does not match register");
        if (e.op.kind != PrimitiveKind::Identity && e.op.kind != PrimitiveKind::Custom &&
            e.op.kind != PrimitiveKind::Oracle && e.op.kind != PrimitiveKind::Estimator && !reg.has(e.op.target))
            throw ModelError("primitive '" + e.op.label() + "' targets a qubit missing from the register");
    }
}

MachineState MachineState::zero(std::shared_ptr<const ExcitationBasis> basis, const RegisterSpec& reg) {
    MachineState m;
    m.basis = std::move(basis);
    m.reg = reg;
    m.amp = CVec::Zero(static_cast<Eigen::Index>(m.basis->size() * reg.dim()));
    return m;
}

MachineState MachineState::product(std::shared_ptr<const ExcitationBasis> basis, const RegisterSpec& reg,
                                   const CVec& reg_state, const CVec& cursor_state) {
    if (static_cast<std::size_t>(reg_state.size()) != reg.dim()) throw ModelError("register state dimension mismatch");
    if (static_cast<std::size_t>(cursor_state.size()) != basis->size())
        throw ModelError("cursor state dimension mismatch");
    MachineState m = zero(std::move(basis), reg);
    const std::size_t rd = reg.dim();
    for (Eigen::Index c = 0; c < cursor_state.size(); ++c)
        for (std::size_t r = 0; r < rd; ++r) m.amp(c * rd + r) = cursor_state(c) * reg_state(r);
    return m;
}

MachineState MachineState::product_at(std::shared_ptr<const ExcitationBasis> basis, const RegisterSpec& reg,
                                      const CVec& reg_state, const std::vector<int>& config) {
    CVec cursor = CVec::Zero(static_cast<Eigen::Index>(basis->size()));
    cursor(basis->rank(config)) = 1.0;
    return product(std::move(basis), reg, reg_state, cursor);
}

CVec register_basis_state(const RegisterSpec& reg, const std::vector<int>& spins) {
    CVec v = CVec::Zero(reg.dim());
    v(reg.index_of(spins)) = 1.0;
    return v;
}

SparseC forward_operator(const ProgramGraph& graph, const ExcitationBasis& basis) {
    graph.validate();
    if (basis.sites() != graph.sites) throw ModelError("basis length does not match graph");
    const std::size_t rd = graph.reg.dim();
    const std::size_t dim = basis.size() * rd;
    std::vector<Eigen::Triplet<cplx>> trip;
    for (const auto& e : graph.edges) {
        const CMat o = e.op.matrix(graph.reg);
        std::vector<std::tuple<std::size_t, std::size_t, cplx>> nz;
        for (std::size_t c = 0; c < rd; ++c)
            for (std::size_t r = 0; r < rd; ++r)
                if (o(r, c) != cplx(0.0, 0.0)) nz.emplace_back(r, c, o(r, c));
        for (std::size_t ci = 0; ci < basis.size(); ++ci) {
            const auto& cfg = basis.config(ci);
            if (!std::binary_search(cfg.begin(), cfg.end(), e.from)) continue;
            if (std::binary_search(cfg.begin(), cfg.end(), e.to)) continue;
            std::vector<int> moved = cfg;
            *std::find(moved.begin(), moved.end(), e.from) = e.to;
            std::sort(moved.begin(), moved.end());
            const std::size_t cj = basis.rank(moved);
            for (const auto& [r, c, v] : nz) trip.emplace_back(cj * rd + r, ci * rd + c, v);
        }
    }
    SparseC f(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    f.setFromTriplets(trip.begin(), trip.end());
    return f;
}

HermitianOperator assemble_hamiltonian(const ProgramGraph& graph, const ExcitationBasis& basis) {
    const SparseC f = forward_operator(graph, basis);
    HermitianOperator h(static_cast<std::size_t>(f.rows()));
    const double g = -0.5 * graph.lambda;
    for (Eigen::Index r = 0; r < f.outerSize(); ++r)
        for (SparseC::InnerIterator it(f, r); it; ++it)
            h.add(static_cast<std::size_t>(it.row()), static_cast<std::size_t>(it.col()), g * it.value());
    return h;
}

HermitianOperator assemble_hamiltonian(const ProgramGraph& graph, int n3) {
    if (n3 < 0 || n3 > graph.sites) throw ModelError("n3 must lie in [0, s]");
    const ExcitationBasis basis(graph.sites, n3);
    return assemble_hamiltonian(graph, basis);
}

CVec number_operator_diagonal(const ExcitationBasis& basis, const RegisterSpec& reg) {
    CVec d(static_cast<Eigen::Index>(basis.size() * reg.dim()));
    for (std::size_t c = 0; c < basis.size(); ++c)
        for (std::size_t r = 0; r < reg.dim(); ++r)
            d(c * reg.dim() + r) = static_cast<double>(basis.config(c).size());
    return d;
}

}  // namespace csim
