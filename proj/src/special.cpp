#include "cursor_sim/numerics.hpp"

#include <cmath>

namespace csim {

std::vector<double> bessel_j_sequence(int nmax, double x) {
    if (nmax < 0) throw NumericsError("bessel_j_sequence: negative order");
    std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
    if (x == 0.0) {
        out[0] = 1.0;
        return out;
    }
    const double ax = std::abs(x);
    int start = std::max(nmax, static_cast<int>(ax)) + 20 + static_cast<int>(12.0 * std::cbrt(ax));
    if (start % 2) ++start;

    // Backward recurrence from a point far beyond the turning point; the
    // minimal solution dominates, normalization from J0 + 2 sum J_2k = 1.
    std::vector<double> v(static_cast<std::size_t>(start) + 2, 0.0);
    v[start + 1] = 0.0;
    v[start] = 1e-30;
    for (int k = start; k > 0; --k) {
        v[k - 1] = 2.0 * k / ax * v[k] - v[k + 1];
        if (std::abs(v[k - 1]) > 1e250) {
            for (int j = k - 1; j <= start + 1; ++j) v[j] *= 1e-250;
        }
    }
    double norm = v[0];
    for (int k = 2; k <= start; k += 2) norm += 2.0 * v[k];
    for (int n = 0; n <= nmax; ++n) {
        double val = v[n] / norm;
        if (x < 0 && (n % 2)) val = -val;
        out[n] = val;
    }
    return out;
}

double bessel_j(int n, double x) {
    const int an = std::abs(n);
    double v = bessel_j_sequence(an, x)[an];
    if (n < 0 && (an % 2)) v = -v;
    return v;
}

namespace {

// H_nu(x) - Y_nu(x) by its Laplace-integral representation (nu = 0, 1).
double struve_minus_neumann_integral(int nu, double x) {
    const double p = nu == 0 ? -0.5 : 0.5;
    const double integral = integrate_adaptive(
        [&](double u) { return std::exp(-u) * std::pow(1.0 + (u / x) * (u / x), p); }, 0.0, 60.0, 1e-13);
    return nu == 0 ? (2.0 / kPi) * integral / x : (2.0 / kPi) * integral;
}

// Same difference from its asymptotic series, truncated at the smallest term.
double struve_minus_neumann_asymptotic(int nu, double x) {
    const double x2 = x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 200; ++k) {
        const double ratio = nu == 0 ? -(2.0 * k + 1) * (2.0 * k + 1) / x2 : (1.0 - 2.0 * k) * (2.0 * k + 1) / x2;
        const double next = term * ratio;
        if (std::abs(next) >= std::abs(term)) break;
        term = next;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return nu == 0 ? (2.0 / (kPi * x)) * sum : (2.0 / kPi) * sum;
}

double struve_series(int nu, double x) {
    const long double hx = 0.5L * x;
    const long double hx2 = hx * hx;
    long double term = nu == 0 ? 2.0L * x / static_cast<long double>(kPi)
                               : 2.0L * x * x / (3.0L * static_cast<long double>(kPi));
    long double sum = term;
    for (int k = 0; k < 500; ++k) {
        const long double denom = nu == 0 ? (k + 1.5L) * (k + 1.5L) : (k + 1.5L) * (k + 2.5L);
        term *= -hx2 / denom;
        sum += term;
        if (k > x && std::abs(term) < 1e-21L * std::abs(sum)) break;
    }
    return static_cast<double>(sum);
}

double struve(int nu, double x) {
    if (x == 0.0) return 0.0;
    const double ax = std::abs(x);
    double v;
    if (ax < 16.0) {
        v = struve_series(nu, ax);
    } else {
        const double y = std::cyl_neumann(static_cast<double>(nu), ax);
        v = y + (ax < 40.0 ? struve_minus_neumann_integral(nu, ax) : struve_minus_neumann_asymptotic(nu, ax));
    }
    // H0 is odd, H1 is even.
    if (x < 0 && nu == 0) v = -v;
    return v;
}

}  // namespace

double struve_h0(double x) { return struve(0, x); }
double struve_h1(double x) { return struve(1, x); }

double bessel_struve(SpecialKind kind, int order, double x) {
    switch (kind) {
        case SpecialKind::J: return bessel_j(order, x);
        case SpecialKind::H0: return struve_h0(x);
        case SpecialKind::H1: return struve_h1(x);
    }
    throw NumericsError("unknown special function kind");
}

}  // namespace csim
