#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csim {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

struct NumericsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Entry {
    std::size_t row;
    std::size_t col;
    cplx value;
};

// Hermitian operator kept as one triangle (row <= col) of a coordinate list.
class HermitianOperator {
public:
    explicit HermitianOperator(std::size_t dim = 0) : dim_(dim) {}

    // Rejects matrices that are not Hermitian to tol * max|M|.
    static HermitianOperator from_dense(const CMat& m, double tol = 1e-12);

    // Adds v at (row, col) together with its mirror conj(v) at (col, row).
    void add(std::size_t row, std::size_t col, cplx v);

    std::size_t dim() const { return dim_; }
    const std::vector<Entry>& entries() const { return entries_; }

    CMat dense() const;
    CVec apply(const CVec& v) const;
    bool is_real() const;

private:
    std::size_t dim_;
    std::vector<Entry> entries_;
};

struct SpectralDecomposition {
    RVec eigenvalues;   // ascending
    CMat eigenvectors;  // columns
    std::size_t dim() const { return static_cast<std::size_t>(eigenvalues.size()); }
};

double hermiticity_defect(const CMat& m);

SpectralDecomposition eigh(const HermitianOperator& op);
SpectralDecomposition eigh(const CMat& m, double tol = 1e-12);

// Symmetric tridiagonal eigenproblem by implicit QL with Wilkinson shifts.
// diag has size n, off has size n-1 (off[i] couples i and i+1).
SpectralDecomposition eigh_tridiagonal(const RVec& diag, const RVec& off);

CVec evolve_spectral(const SpectralDecomposition& dec, const CVec& psi0, double t);

// Precomputes V^dagger psi0 so repeated evaluations cost one matrix-vector product.
class SpectralEvolver {
public:
    SpectralEvolver(const SpectralDecomposition& dec, const CVec& psi0);
    CVec at(double t) const;
    cplx component(std::size_t i, double t) const;

private:
    const SpectralDecomposition* dec_;
    CVec coeff_;
};

// Quadrature ---------------------------------------------------------------

struct QuadratureError : NumericsError {
    QuadratureError(const std::string& what, double best)
        : NumericsError(what), best_estimate(best) {}
    double best_estimate;
};

// Adaptive Gauss-Kronrod (7/15) on [a, b] to absolute tolerance tol.
double integrate_adaptive(const std::function<double(double)>& g, double a, double b,
                          double tol = 1e-9, int max_depth = 50);

// Integral over v in (0,1) via v = sin(u); f may carry a 1/sqrt(1-v^2) factor.
double integrate_arcsine(const std::function<double(double)>& f, double tol = 1e-9);

// Same integral, with the integrand already expressed in u: g(u) = f(sin u) cos u.
double integrate_arcsine_u(const std::function<double(double)>& g, double tol = 1e-9);

// Special functions ----------------------------------------------------------

enum class SpecialKind { J, H0, H1 };

double bessel_j(int n, double x);
// J_0 .. J_nmax at one argument (Miller backward recurrence).
std::vector<double> bessel_j_sequence(int nmax, double x);
double struve_h0(double x);
double struve_h1(double x);
double bessel_struve(SpecialKind kind, int order, double x);

}  // namespace csim
