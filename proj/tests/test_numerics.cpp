#include <doctest.h>

#include <cmath>
#include <random>

#include "cursor_sim/numerics.hpp"

using namespace csim;

namespace {

CMat chain_matrix(int s, double lambda) {
    CMat h = CMat::Zero(s, s);
    for (int i = 0; i + 1 < s; ++i) h(i, i + 1) = h(i + 1, i) = -lambda / 2;
    return h;
}

CMat random_hermitian(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    CMat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cplx(g(rng), g(rng));
    return 0.5 * (m + m.adjoint());
}

// classical RK4 on i psi' = H psi
CVec rk4(const CMat& h, CVec psi, double t, int steps) {
    const double dt = t / steps;
    auto f = [&](const CVec& v) -> CVec { return -kI * (h * v); };
    for (int k = 0; k < steps; ++k) {
        const CVec k1 = f(psi), k2 = f(psi + 0.5 * dt * k1), k3 = f(psi + 0.5 * dt * k2), k4 = f(psi + dt * k3);
        psi += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return psi;
}

double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4 : 2);
    return acc * h / 3;
}

}  // namespace

TEST_CASE("eigh: three-site chain") {
    const auto dec = eigh(chain_matrix(3, 2.0));
    CHECK(dec.eigenvalues(0) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::abs(dec.eigenvalues(1)) < 1e-14);
    CHECK(dec.eigenvalues(2) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("eigh: identity") {
    const auto dec = eigh(CMat(CMat::Identity(4, 4)));
    for (int i = 0; i < 4; ++i) CHECK(dec.eigenvalues(i) == doctest::Approx(1.0));
    // each column is a unit vector up to phase
    for (int c = 0; c < 4; ++c) CHECK(dec.eigenvectors.col(c).cwiseAbs().maxCoeff() == doctest::Approx(1.0));
}

TEST_CASE("eigh: random Hermitian reconstruction and orthonormality") {
    for (int n : {8, 60, 250}) {
        const CMat m = random_hermitian(n, 17 + n);
        const auto dec = eigh(m);
        const CMat rec = dec.eigenvectors * dec.eigenvalues.cast<cplx>().asDiagonal() * dec.eigenvectors.adjoint();
        CHECK((rec - m).cwiseAbs().maxCoeff() <= 1e-10 * n * m.cwiseAbs().maxCoeff());
        CHECK((dec.eigenvectors.adjoint() * dec.eigenvectors - CMat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12 * n);
        for (int i = 1; i < n; ++i) CHECK(dec.eigenvalues(i) >= dec.eigenvalues(i - 1));
    }
}

TEST_CASE("eigh: rejects non-Hermitian input") {
    CMat m = CMat::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(eigh(m), NumericsError);
    CHECK_THROWS_AS(HermitianOperator::from_dense(m), NumericsError);
}

TEST_CASE("HermitianOperator stores one triangle and densifies") {
    HermitianOperator op(3);
    op.add(0, 1, cplx(1, 2));
    op.add(2, 2, 0.5);
    const CMat d = op.dense();
    CHECK(d(1, 0) == cplx(1, -2));
    CHECK(hermiticity_defect(d) == 0.0);
    const CVec v = CVec::Random(3);
    CHECK((op.apply(v) - d * v).norm() < 1e-14);
}

TEST_CASE("chain spectrum for s = 2..60") {
    for (double lambda : {1.0, 2.0})
        for (int s = 2; s <= 60; ++s) {
            const auto dec = eigh(chain_matrix(s, lambda));
            for (int k = 1; k <= s; ++k)
                CHECK(std::abs(dec.eigenvalues(k - 1) + lambda * std::cos(k * kPi / (s + 1))) < 1e-10);
        }
}

TEST_CASE("tridiagonal QL agrees with the dense solver") {
    RVec d(7), e(6);
    d << 0.3, -1, 2, 0, 0.5, 1.5, -0.2;
    e << 1, 0.25, -0.7, 1.1, 0.3, -2;
    CMat m = CMat::Zero(7, 7);
    for (int i = 0; i < 7; ++i) m(i, i) = d(i);
    for (int i = 0; i < 6; ++i) m(i, i + 1) = m(i + 1, i) = e(i);
    const auto a = eigh_tridiagonal(d, e);
    const auto b = eigh(m);
    CHECK((a.eigenvalues - b.eigenvalues).cwiseAbs().maxCoeff() < 1e-12);
    const CMat rec = a.eigenvectors * a.eigenvalues.cast<cplx>().asDiagonal() * a.eigenvectors.adjoint();
    CHECK((rec - m).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("evolve_spectral") {
    SUBCASE("t = 0 is the identity") {
        const auto dec = eigh(random_hermitian(6, 3));
        const CVec psi = CVec::Random(6).normalized();
        CHECK((evolve_spectral(dec, psi, 0.0) - psi).norm() < 1e-13);
    }
    SUBCASE("diagonal phase") {
        CMat h = CMat::Zero(2, 2);
        h(0, 0) = 1;
        h(1, 1) = -1;
        CVec psi(2);
        psi << 1, 0;
        const CVec out = evolve_spectral(eigh(h), psi, kPi);
        CHECK(std::abs(out(0) - std::exp(-kI * kPi)) < 1e-14);
        CHECK(std::norm(out(0)) == doctest::Approx(1.0));
    }
    SUBCASE("five-site chain vs RK4") {
        const CMat h = chain_matrix(5, 2.0);
        CVec psi = CVec::Zero(5);
        psi(0) = 1;
        CHECK((evolve_spectral(eigh(h), psi, 1.3) - rk4(h, psi, 1.3, 4000)).norm() < 1e-8);
    }
    SUBCASE("unitarity and composition") {
        const CMat h = random_hermitian(40, 9);
        const auto dec = eigh(h);
        const CVec psi = CVec::Random(40).normalized();
        for (double t : {0.1, 3.0, 50.0}) CHECK(std::abs(evolve_spectral(dec, psi, t).norm() - 1) < 1e-10);
        const CVec ab = evolve_spectral(dec, evolve_spectral(dec, psi, 1.1), 2.4);
        CHECK((ab - evolve_spectral(dec, psi, 3.5)).norm() < 1e-9);
        const SpectralEvolver ev(dec, psi);
        CHECK((ev.at(2.0) - evolve_spectral(dec, psi, 2.0)).norm() < 1e-12);
        CHECK(std::abs(ev.component(5, 2.0) - ev.at(2.0)(5)) < 1e-12);
    }
    SUBCASE("dimension mismatch") {
        const auto dec = eigh(random_hermitian(3, 1));
        CHECK_THROWS_AS(evolve_spectral(dec, CVec::Ones(4), 1.0), NumericsError);
    }
}

TEST_CASE("integrate_arcsine") {
    auto fm1 = [](double v) { return 4 * v * v / (kPi * std::sqrt(1 - v * v)); };
    CHECK(integrate_arcsine(fm1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(integrate_arcsine([&](double v) { return v * fm1(v); }) ==
          doctest::Approx(8 / (3 * kPi)).epsilon(1e-9));
    const int n = 5;
    auto fvn = [&](double v) {
        const double s = std::sin(2 * n * std::asin(v));
        return s * s / (kPi * n * std::pow(1 - v * v, 1.5));
    };
    // in u the flat law is regular: sin^2(2nu) / (pi n cos^2 u)
    auto gvn = [&](double u) {
        const double c = std::cos(u);
        if (c < 1e-12) return 0.0;
        const double s = std::sin(2 * n * u);
        return s * s / (kPi * n * c * c);
    };
    CHECK(integrate_arcsine_u(gvn) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(integrate_arcsine_u([&](double u) { return std::pow(std::sin(u), 2) * gvn(u); }) ==
          doctest::Approx(1 - 1.0 / (4 * n)).epsilon(1e-9));
    CHECK(fvn(0.5) > 0);
}

TEST_CASE("integrate_adaptive reports failure with a best estimate") {
    CHECK(integrate_adaptive([](double x) { return std::exp(x); }, 0, 1) ==
          doctest::Approx(std::exp(1.0) - 1).epsilon(1e-12));
    try {
        integrate_adaptive([](double x) { return std::sin(1 / x); }, 1e-9, 1, 1e-15, 4);
        FAIL("expected QuadratureError");
    } catch (const QuadratureError& e) {
        CHECK(std::isfinite(e.best_estimate));
    }
}

TEST_CASE("Bessel J") {
    CHECK(bessel_j(0, 0) == 1.0);
    CHECK(bessel_j(1, 0) == 0.0);
    CHECK(bessel_j(9, 7) + bessel_j(11, 7) == doctest::Approx(20.0 / 7 * bessel_j(10, 7)).epsilon(1e-12));
    for (int n : {0, 1, 2, 5, 10, 30, 80})
        for (double x : {0.1, 1.0, 2.5, 7.0, 15.0, 40.0, 120.0, 300.0, 500.0}) {
            const double ref = std::cyl_bessel_j(double(n), x);
            CHECK(std::abs(bessel_j(n, x) - ref) <= 1e-10 * std::max(std::abs(ref), 1e-6));
        }
    const auto seq = bessel_j_sequence(20, 13.0);
    for (int n = 0; n <= 20; ++n) CHECK(std::abs(seq[n] - std::cyl_bessel_j(double(n), 13.0)) < 1e-13);
}

TEST_CASE("Struve H0 and H1 against their integral representations") {
    auto h0 = [](double x) {
        return 2 / kPi * simpson([x](double th) { return std::sin(x * std::cos(th)); }, 0, kPi / 2);
    };
    auto h1 = [](double x) {
        return 2 * x / kPi * simpson([x](double u) { return std::sin(x * std::sin(u)) * std::cos(u) * std::cos(u); },
                                     0, kPi / 2);
    };
    for (double x : {0.5, 2.5, 10.0, 15.9, 16.1, 30.0, 80.0}) {
        CHECK(std::abs(struve_h0(x) - h0(x)) < 1e-10);
        CHECK(std::abs(struve_h1(x) - h1(x)) < 1e-10);
    }
    CHECK(bessel_struve(SpecialKind::H0, 0, 2.5) == struve_h0(2.5));
    CHECK(bessel_struve(SpecialKind::J, 3, 2.5) == bessel_j(3, 2.5));
    CHECK(struve_h0(0) == 0.0);
}
