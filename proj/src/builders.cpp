#include "cursor_sim/builders.hpp"

#include <cmath>

namespace csim {

namespace {

std::vector<int> range_sites(int lo, int hi) {
    std::vector<int> v;
    for (int x = lo; x <= hi; ++x) v.push_back(x);
    return v;
}

}  // namespace

ProgramGraph build_linear_chain(int s, const std::vector<Primitive>& prims, const RegisterSpec& reg,
                                double lambda) {
    if (s < 1) throw ModelError("chain needs at least one site");
    if (static_cast<int>(prims.size()) != s - 1)
        throw ModelError("linear chain of " + std::to_string(s) + " sites needs " + std::to_string(s - 1) +
                         " primitives, got " + std::to_string(prims.size()));
    ProgramGraph g;
    g.sites = s;
    g.lambda = lambda;
    g.reg = reg;
    for (int x = 1; x < s; ++x) {
        if (!prims[x - 1].unitary())
            throw ModelError("non-unitary primitive '" + prims[x - 1].label() + "' on plain chain edge " +
                             std::to_string(x) + "->" + std::to_string(x + 1));
        g.add_edge(x, x + 1, prims[x - 1]);
    }
    g.validate();
    return g;
}

ProgramGraph build_identity_chain(int s, double lambda) {
    return build_linear_chain(s, std::vector<Primitive>(std::max(s - 1, 0), Primitive::identity()), RegisterSpec{},
                              lambda);
}

ProgramGraph build_grover_line(int mu, int s, const std::vector<int>& word, double lambda) {
    if (mu < 1) throw ModelError("grover line needs mu >= 1");
    RegisterSpec reg;
    reg.mu = mu;
    reg.ancilla = true;
    std::vector<Primitive> prims;
    for (int x = 1; x < s; ++x) prims.push_back(x % 2 == 1 ? Primitive::oracle(word) : Primitive::estimator());
    return build_linear_chain(s, prims, reg, lambda);
}

ProgramGraph build_toy_chain(int s, double alpha, double lambda) {
    RegisterSpec reg;
    reg.mu = 1;
    return build_linear_chain(s, std::vector<Primitive>(s - 1, Primitive::rotation_y(alpha, QubitRef::data(1))), reg,
                              lambda);
}

CVec toy_register_state(double theta) {
    CVec v(2);
    v << std::cos(0.5 * theta), std::sin(0.5 * theta);
    return v;
}

CMat toy_oracle(int) {
    CMat a = CMat::Identity(2, 2);
    a(0, 0) = -1.0;
    return a;
}

CMat toy_estimator(int mu) {
    const double chi = std::asin(std::pow(2.0, -0.5 * mu));
    const CVec iota = toy_register_state(kPi - 2.0 * chi);
    return 2.0 * iota * iota.adjoint() - CMat::Identity(2, 2);
}

ProgramGraph build_toy_alternating(int s, int mu, double lambda) {
    RegisterSpec reg;
    reg.mu = 1;
    const Primitive a = Primitive::from_matrix(toy_oracle(mu));
    const Primitive b = Primitive::from_matrix(toy_estimator(mu));
    std::vector<Primitive> prims;
    for (int x = 1; x < s; ++x) prims.push_back(x % 2 == 1 ? a : b);
    return build_linear_chain(s, prims, reg, lambda);
}

int cmu_not_sites(int mu) { return (mu + 1) * (mu + 2); }
int cmu_not_length(int mu) { return 2 * (mu + 1); }

namespace {

void add_cmu_not(ProgramGraph& g, int mu, int j) {
    const QubitRef c = QubitRef::data(mu);
    if (mu == 1) {
        g.add_edge(j, j + 1, Primitive::lower(c));
        g.add_edge(j + 1, j + 2, Primitive::cnot_core());
        g.add_edge(j + 2, j + 5, Primitive::raise(c));
        g.add_edge(j, j + 3, Primitive::raise(c));
        g.add_edge(j + 3, j + 4, Primitive::identity());
        g.add_edge(j + 4, j + 5, Primitive::lower(c));
        return;
    }
    const int sp = cmu_not_sites(mu - 1);
    const int tp = cmu_not_length(mu - 1);
    const int sm = cmu_not_sites(mu);
    g.add_edge(j, j + 1, Primitive::lower(c));
    add_cmu_not(g, mu - 1, j + 1);
    g.add_edge(j + sp, j + sm - 1, Primitive::raise(c));
    // Delay branch: same number of states as the inner block.
    g.add_edge(j, j + sp + 1, Primitive::raise(c));
    for (int k = 1; k <= tp - 1; ++k) g.add_edge(j + sp + k, j + sp + k + 1, Primitive::identity());
    g.add_edge(j + sp + tp, j + sm - 1, Primitive::lower(c));
}

}  // namespace

ProgramGraph build_cmu_not(int mu, int base, double lambda) {
    if (mu < 1) throw ModelError("CmuNOT needs at least one controlling qubit");
    if (base < 1) throw ModelError("base site must be >= 1");
    ProgramGraph g;
    g.sites = base + cmu_not_sites(mu) - 1;
    g.lambda = lambda;
    g.reg.mu = mu;
    g.reg.ancilla = true;
    add_cmu_not(g, mu, base);
    g.metadata["entry"] = {base};
    g.metadata["exit"] = {base + cmu_not_sites(mu) - 1};
    g.validate();
    return g;
}

int iterator_sites(int K) { return 4 * K + 3; }
int iterator_successors(int K) { return (1 << (K + 3)) - 5; }

namespace {

void add_iterator(ProgramGraph& g, int j, int i, const Primitive& A, const Primitive& B) {
    if (j == 0) {
        g.add_edge(i, i + 1, A);
        g.add_edge(i + 1, i + 2, B);
        return;
    }
    const QubitRef r = QubitRef::counter(j);
    g.add_edge(i, i + 1, Primitive::raise(r));
    g.add_edge(i + 1, i + 2, Primitive::negate(r));
    add_iterator(g, j - 1, i + 2, A, B);
    g.add_edge(i + 4 * j, i + 4 * j + 2, Primitive::lower(r));
    g.add_edge(i + 4 * j, i + 4 * j + 1, Primitive::raise(r));
    g.add_edge(i + 4 * j + 1, i + 1, Primitive::lower(r));
}

}  // namespace

ProgramGraph build_subroutine_iterator(int K, const Primitive& A, const Primitive& B, const RegisterSpec& reg,
                                       double lambda) {
    if (K < 1) throw ModelError("iterator needs K >= 1");
    if (reg.counters != K)
        throw ModelError("iterator with K=" + std::to_string(K) + " needs " + std::to_string(K) +
                         " counter qubits, register has " + std::to_string(reg.counters));
    ProgramGraph g;
    g.sites = iterator_sites(K);
    g.lambda = lambda;
    g.reg = reg;
    add_iterator(g, K, 1, A, B);
    g.metadata["entry"] = {1};
    g.metadata["exit"] = {g.sites};
    g.validate();
    return g;
}

ProgramGraph build_trap(int s, int delta, bool double_trap, double lambda) {
    if (s < 2) throw ModelError("trap needs s >= 2");
    if (delta < 1) throw ModelError("trap needs delta >= 1");
    ProgramGraph g;
    g.sites = s + (double_trap ? 2 : 1) * delta;
    g.lambda = lambda;
    g.reg.controls = 1;
    const QubitRef rho = QubitRef::control(1);
    for (int x = 1; x < s; ++x) g.add_edge(x, x + 1, Primitive::identity());
    g.add_edge(s, s + 1, Primitive::lower(rho));
    for (int x = s + 1; x < s + delta; ++x) g.add_edge(x, x + 1, Primitive::identity());
    g.metadata["active"] = range_sites(1, s);
    g.metadata["telomere"] = range_sites(s + 1, s + delta);
    if (double_trap) {
        g.add_edge(s, s + delta + 1, Primitive::raise(rho));
        for (int x = s + delta + 1; x < s + 2 * delta; ++x) g.add_edge(x, x + 1, Primitive::identity());
        g.metadata["telomere2"] = range_sites(s + delta + 1, s + 2 * delta);
    }
    g.validate();
    return g;
}

ProgramGraph build_switch(SwitchVariant variant, const Primitive& A, const Primitive& B, const RegisterSpec& reg,
                          QubitRef control, double lambda) {
    if (!reg.has(control)) throw ModelError("switch control qubit is missing from the register");
    ProgramGraph g;
    g.lambda = lambda;
    g.reg = reg;
    switch (variant) {
        case SwitchVariant::SpinFlip:
        case SwitchVariant::SyncH1:
            g.sites = 6;
            g.add_edge(1, 2, Primitive::lower(control));
            g.add_edge(2, 3, A);
            g.add_edge(3, 6, Primitive::raise(control));
            g.add_edge(1, 4, Primitive::raise(control));
            g.add_edge(4, 5, B);
            g.add_edge(5, 6, Primitive::lower(control));
            break;
        case SwitchVariant::Projective:
            g.sites = 6;
            g.add_edge(1, 2, Primitive::project_plus(control));
            g.add_edge(2, 3, A);
            g.add_edge(3, 6, Primitive::project_plus(control));
            g.add_edge(1, 4, Primitive::project_minus(control));
            g.add_edge(4, 5, B);
            g.add_edge(5, 6, Primitive::project_minus(control));
            break;
        case SwitchVariant::SyncH2:
            g.sites = 5;
            g.add_edge(1, 2, Primitive::lower(control));
            g.add_edge(2, 3, A);
            g.add_edge(3, 5, Primitive::raise(control));
            g.add_edge(1, 4, Primitive::raise(control));
            g.add_edge(4, 5, Primitive::lower(control));
            break;
    }
    g.metadata["entry"] = {1};
    g.metadata["exit"] = {g.sites};
    g.validate();
    return g;
}

ProgramGraph build_sync_switch(bool synchronized, double lambda) {
    RegisterSpec reg;
    reg.mu = 2;
    return build_switch(synchronized ? SwitchVariant::SyncH1 : SwitchVariant::SyncH2,
                        Primitive::pauli(3, QubitRef::data(2)), Primitive::identity(), reg, QubitRef::data(1), lambda);
}

ProgramGraph build_two_link(int a, int b, const Primitive& A, const Primitive& B, int s, const RegisterSpec& reg,
                            double lambda) {
    if (a == b) throw ModelError("active links overlap (a == b)");
    if (!(1 <= a && a < b && b <= s - 1)) throw ModelError("two-link graph needs 1 <= a < b <= s-1");
    std::vector<Primitive> prims(s - 1, Primitive::identity());
    prims[a - 1] = A;
    prims[b - 1] = B;
    ProgramGraph g = build_linear_chain(s, prims, reg, lambda);
    g.metadata["links"] = {a, b};
    return g;
}

ProgramGraph build_single_active_link(int s, int x0, const Primitive& G, const RegisterSpec& reg, double lambda) {
    if (x0 < 1 || x0 > s - 1) throw ModelError("active link must lie in 1..s-1");
    std::vector<Primitive> prims(s - 1, Primitive::identity());
    prims[x0 - 1] = G;
    ProgramGraph g = build_linear_chain(s, prims, reg, lambda);
    g.metadata["links"] = {x0};
    return g;
}

}  // namespace csim
