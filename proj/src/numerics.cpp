#include "cursor_sim/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>

namespace csim {

HermitianOperator HermitianOperator::from_dense(const CMat& m, double tol) {
    if (m.rows() != m.cols()) throw NumericsError("operator must be square");
    const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-300);
    const double defect = hermiticity_defect(m);
    if (defect > tol * scale)
        throw NumericsError("operator is not Hermitian: max|M - M^dagger| = " + std::to_string(defect));
    HermitianOperator op(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r <= c; ++r) {
            cplx v = m(r, c);
            if (r == c) v = cplx(v.real(), 0.0);
            if (v != cplx(0.0, 0.0))
                op.entries_.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), v});
        }
    return op;
}

void HermitianOperator::add(std::size_t row, std::size_t col, cplx v) {
    if (row >= dim_ || col >= dim_) throw NumericsError("entry index out of range");
    if (row == col) {
        if (std::abs(v.imag()) > 1e-14 * std::max(1.0, std::abs(v)))
            throw NumericsError("diagonal entry of a Hermitian operator must be real");
        entries_.push_back({row, col, cplx(v.real(), 0.0)});
    } else if (row < col) {
        entries_.push_back({row, col, v});
    } else {
        entries_.push_back({col, row, std::conj(v)});
    }
}

CMat HermitianOperator::dense() const {
    CMat m = CMat::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (const auto& e : entries_) {
        m(e.row, e.col) += e.value;
        if (e.row != e.col) m(e.col, e.row) += std::conj(e.value);
    }
    return m;
}

CVec HermitianOperator::apply(const CVec& v) const {
    if (static_cast<std::size_t>(v.size()) != dim_) throw NumericsError("dimension mismatch in apply");
    CVec out = CVec::Zero(v.size());
    for (const auto& e : entries_) {
        out(e.row) += e.value * v(e.col);
        if (e.row != e.col) out(e.col) += std::conj(e.value) * v(e.row);
    }
    return out;
}

bool HermitianOperator::is_real() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Entry& e) { return e.value.imag() == 0.0; });
}

double hermiticity_defect(const CMat& m) {
    if (m.size() == 0) return 0.0;
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

namespace {

// Eigen's own solver: the system OpenBLAS kernel mis-detects some CPUs and returns garbage for n > ~100.
SpectralDecomposition eigh_dense(const CMat& m) {
    SpectralDecomposition dec;
    if (m.rows() == 0) {
        dec.eigenvalues.resize(0);
        return dec;
    }
    if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
        Eigen::SelfAdjointEigenSolver<RMat> es(m.real());
        if (es.info() != Eigen::Success) throw NumericsError("eigensolver failed to converge");
        dec.eigenvalues = es.eigenvalues();
        dec.eigenvectors = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<CMat> es(m);
        if (es.info() != Eigen::Success) throw NumericsError("eigensolver failed to converge");
        dec.eigenvalues = es.eigenvalues();
        dec.eigenvectors = es.eigenvectors();
    }
    return dec;
}

}  // namespace

SpectralDecomposition eigh(const HermitianOperator& op) { return eigh_dense(op.dense()); }

SpectralDecomposition eigh(const CMat& m, double tol) {
    if (m.rows() != m.cols()) throw NumericsError("operator must be square");
    const double scale = m.size() ? std::max(m.cwiseAbs().maxCoeff(), 1e-300) : 1.0;
    const double defect = hermiticity_defect(m);
    if (defect > tol * scale)
        throw NumericsError("operator is not Hermitian: max|M - M^dagger| = " + std::to_string(defect));
    CMat sym = 0.5 * (m + m.adjoint());
    return eigh_dense(sym);
}

SpectralDecomposition eigh_tridiagonal(const RVec& diag, const RVec& off) {
    const int n = static_cast<int>(diag.size());
    if (n > 0 && off.size() != n - 1) throw NumericsError("tridiagonal: off-diagonal must have size n-1");
    RVec d = diag;
    RVec e = RVec::Zero(n);
    for (int i = 0; i + 1 < n; ++i) e(i) = off(i);
    RMat z = RMat::Identity(n, n);

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d(m)) + std::abs(d(m + 1));
                if (std::abs(e(m)) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (++iter > 60) throw NumericsError("implicit QL did not converge");
                double g = (d(l + 1) - d(l)) / (2.0 * e(l));
                double r = std::hypot(g, 1.0);
                g = d(m) - d(l) + e(l) / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e(i);
                    const double b = c * e(i);
                    r = std::hypot(f, g);
                    e(i + 1) = r;
                    if (r == 0.0) {
                        d(i + 1) -= p;
                        e(m) = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d(i + 1) - p;
                    r = (d(i) - g) * s + 2.0 * c * b;
                    p = s * r;
                    d(i + 1) = g + p;
                    g = c * r - b;
                    for (int k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d(l) -= p;
                e(l) = g;
                e(m) = 0.0;
            }
        } while (m != l);
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return d(a) < d(b); });
    SpectralDecomposition dec;
    dec.eigenvalues.resize(n);
    dec.eigenvectors.resize(n, n);
    for (int j = 0; j < n; ++j) {
        dec.eigenvalues(j) = d(order[j]);
        dec.eigenvectors.col(j) = z.col(order[j]).cast<cplx>();
    }
    return dec;
}

CVec evolve_spectral(const SpectralDecomposition& dec, const CVec& psi0, double t) {
    if (static_cast<std::size_t>(psi0.size()) != dec.dim())
        throw NumericsError("evolve_spectral: dimension mismatch");
    CVec coeff = dec.eigenvectors.adjoint() * psi0;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) *= std::exp(-kI * dec.eigenvalues(k) * t);
    return dec.eigenvectors * coeff;
}

SpectralEvolver::SpectralEvolver(const SpectralDecomposition& dec, const CVec& psi0) : dec_(&dec) {
    if (static_cast<std::size_t>(psi0.size()) != dec.dim())
        throw NumericsError("SpectralEvolver: dimension mismatch");
    coeff_ = dec.eigenvectors.adjoint() * psi0;
}

CVec SpectralEvolver::at(double t) const {
    CVec c = coeff_;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(-kI * dec_->eigenvalues(k) * t);
    return dec_->eigenvectors * c;
}

cplx SpectralEvolver::component(std::size_t i, double t) const {
    cplx acc = 0.0;
    for (Eigen::Index k = 0; k < coeff_.size(); ++k)
        acc += dec_->eigenvectors(static_cast<Eigen::Index>(i), k) * coeff_(k) *
               std::exp(-kI * dec_->eigenvalues(k) * t);
    return acc;
}

// Quadrature ---------------------------------------------------------------

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
    double value;
    double error;
};

GkResult gauss_kronrod(const std::function<double(double)>& g, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = g(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        const double f1 = g(c - dx), f2 = g(c + dx);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

struct Adaptive {
    const std::function<double(double)>& g;
    int max_depth;
    bool failed = false;

    double run(double a, double b, double tol, int depth) {
        const GkResult r = gauss_kronrod(g, a, b);
        if (!std::isfinite(r.value)) throw NumericsError("quadrature: integrand not finite");
        if (r.error <= tol || std::abs(b - a) < 1e-15) return r.value;
        if (depth >= max_depth) {
            failed = true;
            return r.value;
        }
        const double m = 0.5 * (a + b);
        return run(a, m, 0.5 * tol, depth + 1) + run(m, b, 0.5 * tol, depth + 1);
    }
};

}  // namespace

double integrate_adaptive(const std::function<double(double)>& g, double a, double b, double tol,
                          int max_depth) {
    Adaptive ad{g, max_depth};
    // A few initial panels keep oscillatory integrands from fooling the first estimate.
    constexpr int panels = 8;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double lo = a + (b - a) * i / panels, hi = a + (b - a) * (i + 1) / panels;
        total += ad.run(lo, hi, tol / panels, 0);
    }
    if (ad.failed) throw QuadratureError("quadrature did not reach the requested tolerance", total);
    return total;
}

double integrate_arcsine(const std::function<double(double)>& f, double tol) {
    return integrate_adaptive([&](double u) { return f(std::sin(u)) * std::cos(u); }, 0.0, 0.5 * kPi, tol);
}

double integrate_arcsine_u(const std::function<double(double)>& g, double tol) {
    return integrate_adaptive(g, 0.0, 0.5 * kPi, tol);
}

}  // namespace csim
