#include "cursor_sim/register.hpp"

#include <cmath>
#include <sstream>

namespace csim {

int RegisterSpec::position(const QubitRef& q) const {
    if (!has(q)) throw ModelError("register has no such qubit");
    switch (q.role) {
        case Role::Data: return q.index - 1;
        case Role::Ancilla: return mu;
        case Role::Counter: return mu + (ancilla ? 1 : 0) + q.index - 1;
        case Role::Control: return mu + (ancilla ? 1 : 0) + counters + q.index - 1;
    }
    return -1;
}

bool RegisterSpec::has(const QubitRef& q) const {
    switch (q.role) {
        case Role::Data: return q.index >= 1 && q.index <= mu;
        case Role::Ancilla: return ancilla;
        case Role::Counter: return q.index >= 1 && q.index <= counters;
        case Role::Control: return q.index >= 1 && q.index <= controls;
    }
    return false;
}

std::size_t RegisterSpec::index_of(const std::vector<int>& spins) const {
    if (static_cast<int>(spins.size()) != qubits()) throw ModelError("spin list length does not match register");
    std::size_t idx = 0;
    for (int s : spins) {
        if (s != 1 && s != -1) throw ModelError("spin values must be +1 or -1");
        idx = (idx << 1) | (s == -1 ? 1u : 0u);
    }
    return idx;
}

std::vector<int> RegisterSpec::spins_of(std::size_t index) const {
    const int n = qubits();
    std::vector<int> spins(n);
    for (int p = 0; p < n; ++p) spins[p] = ((index >> (n - 1 - p)) & 1u) ? -1 : 1;
    return spins;
}

CMat sigma(int axis) {
    CMat m(2, 2);
    switch (axis) {
        case 0: m << 1, 0, 0, 1; break;
        case 1: m << 0, 1, 1, 0; break;
        case 2: m << 0, -kI, kI, 0; break;
        case 3: m << 1, 0, 0, -1; break;
        default: throw ModelError("Pauli axis must be 1, 2 or 3");
    }
    return m;
}

CMat sigma_plus() {
    CMat m(2, 2);
    m << 0, 1, 0, 0;
    return m;
}

CMat sigma_minus() {
    CMat m(2, 2);
    m << 0, 0, 1, 0;
    return m;
}

CMat embed(const RegisterSpec& reg, const QubitRef& q, const CMat& op) {
    const int n = reg.qubits();
    const int p = reg.position(q);
    const std::size_t dim = reg.dim();
    const std::size_t bit = std::size_t{1} << (n - 1 - p);
    CMat m = CMat::Zero(dim, dim);
    for (std::size_t col = 0; col < dim; ++col) {
        const int b = (col & bit) ? 1 : 0;
        for (int a = 0; a < 2; ++a) {
            const cplx v = op(a, b);
            if (v == cplx(0.0, 0.0)) continue;
            const std::size_t row = a ? (col | bit) : (col & ~bit);
            m(row, col) += v;
        }
    }
    return m;
}

Primitive Primitive::pauli(int axis, QubitRef q) {
    Primitive p;
    if (axis < 1 || axis > 3) throw ModelError("Pauli axis must be 1, 2 or 3");
    p.kind = axis == 1 ? PrimitiveKind::Pauli1 : axis == 2 ? PrimitiveKind::Pauli2 : PrimitiveKind::Pauli3;
    p.target = q;
    return p;
}

Primitive Primitive::rotation_y(double angle, QubitRef q) {
    Primitive p;
    p.kind = PrimitiveKind::RotationY;
    p.angle = angle;
    p.target = q;
    return p;
}

Primitive Primitive::oracle(std::vector<int> word) {
    Primitive p;
    p.kind = PrimitiveKind::Oracle;
    p.word = std::move(word);
    p.target = QubitRef::ancilla();
    return p;
}

Primitive Primitive::estimator() {
    Primitive p;
    p.kind = PrimitiveKind::Estimator;
    p.target = QubitRef::ancilla();
    return p;
}

Primitive Primitive::cnot_core() {
    Primitive p;
    p.kind = PrimitiveKind::CNotCore;
    p.target = QubitRef::ancilla();
    return p;
}

#define CSIM_SIMPLE_PRIMITIVE(fn, K)     \
    Primitive Primitive::fn(QubitRef q) { \
        Primitive p;                      \
        p.kind = PrimitiveKind::K;        \
        p.target = q;                     \
        return p;                         \
    }
CSIM_SIMPLE_PRIMITIVE(raise, Raise)
CSIM_SIMPLE_PRIMITIVE(lower, Lower)
CSIM_SIMPLE_PRIMITIVE(negate, Negate)
CSIM_SIMPLE_PRIMITIVE(project_plus, ProjectPlus)
CSIM_SIMPLE_PRIMITIVE(project_minus, ProjectMinus)
#undef CSIM_SIMPLE_PRIMITIVE

Primitive Primitive::from_matrix(CMat m) {
    if (m.rows() != m.cols()) throw ModelError("custom primitive must be square");
    Primitive p;
    p.kind = PrimitiveKind::Custom;
    p.custom = std::move(m);
    return p;
}

bool Primitive::unitary() const {
    switch (kind) {
        case PrimitiveKind::Raise:
        case PrimitiveKind::Lower:
        case PrimitiveKind::ProjectPlus:
        case PrimitiveKind::ProjectMinus: return false;
        case PrimitiveKind::Custom: {
            const CMat d = custom.adjoint() * custom - CMat::Identity(custom.rows(), custom.cols());
            return d.size() == 0 || d.cwiseAbs().maxCoeff() <= 1e-12;
        }
        default: return true;
    }
}

CMat Primitive::matrix(const RegisterSpec& reg) const {
    const std::size_t dim = reg.dim();
    switch (kind) {
        case PrimitiveKind::Identity: return CMat::Identity(dim, dim);
        case PrimitiveKind::Pauli1:
        case PrimitiveKind::Negate: return embed(reg, target, sigma(1));
        case PrimitiveKind::Pauli2: return embed(reg, target, sigma(2));
        case PrimitiveKind::Pauli3: return embed(reg, target, sigma(3));
        case PrimitiveKind::RotationY: {
            CMat r(2, 2);
            const double c = std::cos(0.5 * angle), s = std::sin(0.5 * angle);
            r << c, -s, s, c;  // exp(-i angle sigma2 / 2)
            return embed(reg, target, r);
        }
        case PrimitiveKind::CNotCore: return embed(reg, QubitRef::ancilla(), sigma(1));
        case PrimitiveKind::Raise: return embed(reg, target, sigma_plus());
        case PrimitiveKind::Lower: return embed(reg, target, sigma_minus());
        case PrimitiveKind::ProjectPlus: return embed(reg, target, 0.5 * (sigma(0) + sigma(3)));
        case PrimitiveKind::ProjectMinus: return embed(reg, target, 0.5 * (sigma(0) - sigma(3)));
        case PrimitiveKind::Oracle:
        case PrimitiveKind::Estimator: {
            if (!reg.ancilla) throw ModelError("oracle/estimator need an ancilla qubit");
            // 1 + (sigma1(nu) - 1) P, with P the projector on the marked data state.
            const int mu = reg.mu;
            const std::size_t ddim = std::size_t{1} << mu;
            CMat proj = CMat::Zero(ddim, ddim);
            if (kind == PrimitiveKind::Oracle) {
                if (static_cast<int>(word.size()) != mu) throw ModelError("oracle word length must equal mu");
                std::size_t w = 0;
                for (int s : word) {
                    if (s != 1 && s != -1) throw ModelError("oracle word entries must be +1 or -1");
                    w = (w << 1) | (s == -1 ? 1u : 0u);
                }
                proj(w, w) = 1.0;
            } else {
                proj.setConstant(1.0 / static_cast<double>(ddim));  // all sigma1 = +1
            }
            const std::size_t rest = dim >> mu;          // ancilla and everything after it
            const std::size_t after = rest >> 1;         // qubits after the ancilla
            CMat anc = sigma(1) - sigma(0);
            CMat m = CMat::Identity(dim, dim);
            for (std::size_t di = 0; di < ddim; ++di)
                for (std::size_t dj = 0; dj < ddim; ++dj) {
                    if (proj(di, dj) == cplx(0.0, 0.0)) continue;
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b) {
                            if (anc(a, b) == cplx(0.0, 0.0)) continue;
                            for (std::size_t r = 0; r < after; ++r) {
                                const std::size_t row = (di * 2 + a) * after + r;
                                const std::size_t col = (dj * 2 + b) * after + r;
                                m(row, col) += proj(di, dj) * anc(a, b);
                            }
                        }
                }
            return m;
        }
        case PrimitiveKind::Custom:
            if (static_cast<std::size_t>(custom.rows()) != dim)
                throw ModelError("custom primitive dimension does not match register");
            return custom;
    }
    throw ModelError("unknown primitive kind");
}

namespace {

std::string qubit_label(const QubitRef& q) {
    switch (q.role) {
        case Role::Data: return "d" + std::to_string(q.index);
        case Role::Ancilla: return "a";
        case Role::Counter: return "k" + std::to_string(q.index);
        case Role::Control: return "c" + std::to_string(q.index);
    }
    return "?";
}

}  // namespace

std::string Primitive::label() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind) {
        case PrimitiveKind::Identity: return "I";
        case PrimitiveKind::Pauli1: return "sigma1:" + qubit_label(target);
        case PrimitiveKind::Pauli2: return "sigma2:" + qubit_label(target);
        case PrimitiveKind::Pauli3: return "sigma3:" + qubit_label(target);
        case PrimitiveKind::RotationY: os << "roty:" << angle << ":" << qubit_label(target); return os.str();
        case PrimitiveKind::Oracle:
            os << "oracle:";
            for (std::size_t i = 0; i < word.size(); ++i) os << (i ? "," : "") << (word[i] > 0 ? "+1" : "-1");
            return os.str();
        case PrimitiveKind::Estimator: return "estimator";
        case PrimitiveKind::CNotCore: return "cnot";
        case PrimitiveKind::Raise: return "raise:" + qubit_label(target);
        case PrimitiveKind::Lower: return "lower:" + qubit_label(target);
        case PrimitiveKind::Negate: return "negate:" + qubit_label(target);
        case PrimitiveKind::ProjectPlus: return "proj+:" + qubit_label(target);
        case PrimitiveKind::ProjectMinus: return "proj-:" + qubit_label(target);
        case PrimitiveKind::Custom: {
            os << "custom:" << custom.rows() << ":";
            for (Eigen::Index r = 0; r < custom.rows(); ++r)
                for (Eigen::Index c = 0; c < custom.cols(); ++c)
                    os << ((r || c) ? "," : "") << custom(r, c).real() << "," << custom(r, c).imag();
            return os.str();
        }
    }
    return "?";
}

}  // namespace csim
