#include "cursor_sim/observables.hpp"

#include <cmath>

#include "cursor_sim/peres.hpp"
#include "cursor_sim/velocity.hpp"

namespace csim {

namespace {

// Amplitudes as a (register x config) matrix view.
Eigen::Map<const CMat> as_matrix(const MachineState& psi) {
    return {psi.amp.data(), static_cast<Eigen::Index>(psi.reg.dim()),
            static_cast<Eigen::Index>(psi.basis->size())};
}

}  // namespace

RVec cursor_distribution(const MachineState& psi) {
    return as_matrix(psi).cwiseAbs2().colwise().sum().transpose();
}

RVec site_occupancy(const MachineState& psi) {
    const RVec p = cursor_distribution(psi);
    RVec occ = RVec::Zero(psi.basis->sites());
    for (std::size_t c = 0; c < psi.basis->size(); ++c)
        for (int x : psi.basis->config(c)) occ(x - 1) += p(c);
    return occ;
}

RVec position_marginal(const MachineState& psi, int i) {
    if (i < 1 || i > psi.basis->excitations()) throw ModelError("position index out of range");
    const RVec p = cursor_distribution(psi);
    RVec out = RVec::Zero(psi.basis->sites());
    for (std::size_t c = 0; c < psi.basis->size(); ++c) out(psi.basis->config(c)[i - 1] - 1) += p(c);
    return out;
}

CMat register_density(const MachineState& psi) {
    const auto m = as_matrix(psi);
    return m * m.adjoint();
}

CMat cursor_density(const MachineState& psi) {
    const auto m = as_matrix(psi);
    return m.transpose() * m.conjugate();
}

BlochState bloch_polar(const CMat& rho, const BlochState* prev) {
    if (rho.rows() != 2 || rho.cols() != 2) throw ModelError("Bloch coordinates need a 2x2 density matrix");
    BlochState b;
    b.s1 = (rho * sigma(1)).trace().real();
    b.s2 = (rho * sigma(2)).trace().real();
    b.s3 = (rho * sigma(3)).trace().real();
    b.r = std::sqrt(b.s1 * b.s1 + b.s2 * b.s2 + b.s3 * b.s3);
    const double planar = std::hypot(b.s1, b.s3);
    if (planar < 1e-12) {
        b.degenerate = true;
        b.gamma = prev ? prev->gamma : 0.0;
        return b;
    }
    double g = std::atan2(b.s1, b.s3);
    if (prev) {
        const double k = std::round((prev->gamma - g) / (2.0 * kPi));
        g += 2.0 * kPi * k;
    }
    b.gamma = g;
    return b;
}

std::vector<BlochState> bloch_series(const std::vector<CMat>& rhos) {
    std::vector<BlochState> out;
    out.reserve(rhos.size());
    for (const auto& r : rhos) out.push_back(bloch_polar(r, out.empty() ? nullptr : &out.back()));
    return out;
}

double von_neumann_entropy(const CMat& rho) {
    const SpectralDecomposition dec = eigh(rho, 1e-10);
    double s = 0.0;
    for (Eigen::Index i = 0; i < dec.eigenvalues.size(); ++i) {
        const double l = dec.eigenvalues(i);
        if (l >= 1e-14) s -= l * std::log(l);
    }
    return s;
}

double entropy_from_radius(double r) {
    double s = 0.0;
    for (double l : {0.5 * (1.0 + r), 0.5 * (1.0 - r)})
        if (l >= 1e-14) s -= l * std::log(l);
    return s;
}

double lindblad_residual(const std::vector<BlochState>& bloch, const std::vector<CMat>& rhos, double h) {
    if (bloch.size() != rhos.size() || bloch.size() < 3) throw ModelError("Lindblad residual needs >= 3 samples");
    if (!(h > 0)) throw ModelError("grid step must be positive");
    for (const auto& b : bloch)
        if (b.r < 1e-6) throw ModelError("Bloch radius below 1e-6: d ln r / dt is unreliable");
    const CMat s2 = sigma(2);
    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < rhos.size(); ++i) {
        const CMat drho = (rhos[i + 1] - rhos[i - 1]) / (2.0 * h);
        const double dg = (bloch[i + 1].gamma - bloch[i - 1].gamma) / (2.0 * h);
        const double dlr = (std::log(bloch[i + 1].r) - std::log(bloch[i - 1].r)) / (2.0 * h);
        const CMat& r = rhos[i];
        const CMat c1 = s2 * r - r * s2;
        const CMat c2 = s2 * c1 - c1 * s2;
        const CMat rhs = (-0.5 * kI * dg) * c1 + (0.25 * dlr) * c2;
        worst = std::max(worst, (drho - rhs).cwiseAbs().maxCoeff());
    }
    return worst;
}

std::vector<MeasurementOutcome> measure_projector(const MachineState& psi, const CMat& projector) {
    const Eigen::Index rd = static_cast<Eigen::Index>(psi.reg.dim());
    if (projector.rows() != rd || projector.cols() != rd) throw ModelError("projector dimension mismatch");
    if ((projector * projector - projector).cwiseAbs().maxCoeff() > 1e-10 || hermiticity_defect(projector) > 1e-10)
        throw ModelError("measurement operator is not an orthogonal projector");
    const CMat comp = CMat::Identity(rd, rd) - projector;
    std::vector<MeasurementOutcome> out;
    for (const CMat* p : {&projector, &comp}) {
        MachineState m = psi;
        const auto src = as_matrix(psi);
        Eigen::Map<CMat> dst(m.amp.data(), rd, static_cast<Eigen::Index>(psi.basis->size()));
        dst = (*p) * src;
        MeasurementOutcome o;
        o.probability = m.amp.squaredNorm();
        if (o.probability > 1e-300) {
            m.amp /= std::sqrt(o.probability);
            o.collapsed = std::move(m);
        }
        out.push_back(std::move(o));
    }
    return out;
}

std::vector<EnergyLevel> energy_distribution(const CVec& psi, const SpectralDecomposition& dec) {
    if (static_cast<std::size_t>(psi.size()) != dec.dim()) throw ModelError("state dimension mismatch");
    const RVec w = (dec.eigenvectors.adjoint() * psi).cwiseAbs2();
    const double scale = dec.dim() ? dec.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
    const double tol = 1e-9 * std::max(scale, 1e-300);
    std::vector<EnergyLevel> out;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        const double e = dec.eigenvalues(k);
        if (!out.empty() && std::abs(e - out.back().energy) <= tol) out.back().probability += w(k);
        else out.push_back({e, w(k)});
    }
    return out;
}

cplx toy_bloch_approx(double t, double theta, double alpha, double lambda) {
    return std::exp(kI * (theta - alpha)) * characteristic_m1(alpha * lambda * t);
}

double telomere_bound(int s, int delta) {
    if (s < 1 || delta < 0) throw ModelError("telomere bound needs s >= 1, delta >= 0");
    const double u = 1.0 / (1.0 + 2.0 * delta / double(s));
    return 1.0 - (2.0 / kPi) * (std::asin(u) - u * std::sqrt(1.0 - u * u));
}

double grover_success_probability(double t, int s, int mu, double lambda) {
    const double th = std::asin(std::pow(2.0, -0.5 * mu));
    double p = 0.0;
    for (int x = 1; x <= s; ++x) {
        const int xodd = (x % 2 == 1) ? x : x - 1;
        p += std::norm(chain_amplitude(t, x, s, lambda)) * std::pow(std::sin(th * xodd), 2);
    }
    return p;
}

}  // namespace csim
