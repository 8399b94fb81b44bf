#include "cursor_sim/grover.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/KroneckerProduct>

namespace csim {

namespace {

std::size_t word_index(const std::vector<int>& word) {
    std::size_t w = 0;
    for (int z : word) w = (w << 1) | (z == -1 ? 1u : 0u);
    return w;
}

RegisterSpec grover_register(int mu) {
    RegisterSpec reg;
    reg.mu = mu;
    reg.ancilla = true;
    return reg;
}

}  // namespace

GroverParams grover_params(int mu, std::vector<int> target) {
    if (mu < 1) throw ModelError("grover needs mu >= 1");
    if (target.empty()) target.assign(mu, 1);
    if (static_cast<int>(target.size()) != mu) throw ModelError("target word length must equal mu");
    for (int z : target)
        if (z != 1 && z != -1) throw ModelError("target word entries must be +1 or -1");
    GroverParams p;
    p.mu = mu;
    p.chi = std::asin(std::pow(2.0, -0.5 * mu));
    p.theta = kPi - 2.0 * p.chi;
    p.alpha = -4.0 * p.chi;
    p.n_opt = static_cast<int>(std::floor(0.25 * kPi * std::pow(2.0, 0.5 * mu)));
    p.target = std::move(target);
    return p;
}

std::pair<double, double> register_amplitudes(int n, int mu) {
    if (n < 0) throw ModelError("step count must be >= 0");
    const double chi = std::asin(std::pow(2.0, -0.5 * mu));
    const double sgn = (n % 2 == 0) ? 1.0 : -1.0;
    const double a = (2.0 * n + 1.0) * chi;
    return {sgn * std::sin(a), sgn * std::cos(a) / std::sqrt(std::pow(2.0, mu) - 1.0)};
}

double machine_overlap(int n, int mu) {
    if (n < 0) throw ModelError("step count must be >= 0");
    const double s = std::sin((2.0 * n + 1.0) * std::asin(std::pow(2.0, -0.5 * mu)));
    return s * s;
}

RotationCheck ba_rotation_check(int mu) {
    const GroverParams p = grover_params(mu);
    // Basis (|target>, normalized rest); iota has components (sin chi, cos chi).
    CMat a = CMat::Identity(2, 2);
    a(0, 0) = -1.0;
    CVec iota(2);
    iota << std::sin(p.chi), std::cos(p.chi);
    const CMat b = 2.0 * iota * iota.adjoint() - CMat::Identity(2, 2);
    const double h = 0.5 * p.alpha;
    CMat rot(2, 2);
    rot << std::cos(h), -std::sin(h), std::sin(h), std::cos(h);  // exp(-i h sigma2)
    RotationCheck r;
    r.ba = (b * a - rot).cwiseAbs().maxCoeff();
    r.a_square = (a * a - CMat::Identity(2, 2)).cwiseAbs().maxCoeff();
    r.b_square = (b * b - CMat::Identity(2, 2)).cwiseAbs().maxCoeff();
    return r;
}

CVec grover_initial_register(int mu) {
    CVec plus(2), minus(2);
    plus << 1.0, 1.0;
    minus << 1.0, -1.0;
    plus /= std::sqrt(2.0);
    minus /= std::sqrt(2.0);
    CVec v = CVec::Ones(1);
    for (int i = 0; i < mu; ++i) v = Eigen::kroneckerProduct(v, plus).eval();
    return Eigen::kroneckerProduct(v, minus).eval();
}

CVec grover_register_state(int n, const GroverParams& p) {
    const auto [alpha, beta] = register_amplitudes(n, p.mu);
    const std::size_t ddim = std::size_t{1} << p.mu;
    CVec data = CVec::Constant(ddim, beta);
    data(word_index(p.target)) = alpha;
    CVec minus(2);
    minus << 1.0, -1.0;
    return Eigen::kroneckerProduct(data, minus / std::sqrt(2.0)).eval();
}

std::pair<double, double> oracle_checks(const GroverParams& p) {
    const RegisterSpec reg = grover_register(p.mu);
    const CMat a = Primitive::oracle(p.target).matrix(reg);
    const Eigen::Index d = a.rows();
    const double inv = (a * a - CMat::Identity(d, d)).cwiseAbs().maxCoeff();
    // Restrict to sigma1(nu) = -1: columns data (x) |->.
    const std::size_t ddim = std::size_t{1} << p.mu;
    CVec minus(2);
    minus << 1.0, -1.0;
    minus /= std::sqrt(2.0);
    const CMat iso = Eigen::kroneckerProduct(CMat::Identity(ddim, ddim), minus).eval();
    const CMat restricted = iso.adjoint() * a * iso;
    CMat expect = CMat::Identity(ddim, ddim);
    expect(word_index(p.target), word_index(p.target)) = -1.0;
    return {inv, (restricted - expect).cwiseAbs().maxCoeff()};
}

RVec conditional_target_probability(const MachineState& psi, const std::vector<int>& target, double floor) {
    if (psi.basis->excitations() != 1) throw ModelError("conditional probability needs a single excitation");
    if (static_cast<int>(target.size()) != psi.reg.mu) throw ModelError("target word length must equal mu");
    const std::size_t rd = psi.reg.dim();
    const std::size_t tail = rd >> psi.reg.mu;
    const std::size_t w = word_index(target);
    RVec out(psi.basis->sites());
    for (std::size_t c = 0; c < psi.basis->size(); ++c) {
        double tot = 0, hit = 0;
        for (std::size_t r = 0; r < rd; ++r) {
            const double p = std::norm(psi.amp(psi.index(r, c)));
            tot += p;
            if (r / tail == w) hit += p;
        }
        out(psi.basis->config(c)[0] - 1) = tot < floor ? std::numeric_limits<double>::quiet_NaN() : hit / tot;
    }
    return out;
}

}  // namespace csim
