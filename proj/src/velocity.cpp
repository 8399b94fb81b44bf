#include "cursor_sim/velocity.hpp"

#include <algorithm>
#include <cmath>

#include "cursor_sim/observables.hpp"
#include "cursor_sim/peres.hpp"

namespace csim {

SpeedLaw SpeedLaw::from_site(int x0) {
    if (x0 < 1) throw ModelError("starting site must be >= 1");
    SpeedLaw l;
    l.family = SpeedFamily::FromSite;
    l.x0 = x0;
    return l;
}

SpeedLaw SpeedLaw::general(const CVec& psi0) {
    if (psi0.size() == 0 || std::abs(psi0.norm() - 1.0) > 1e-10) throw ModelError("initial cursor state must be normalized");
    SpeedLaw l;
    l.family = SpeedFamily::General;
    l.psi0 = psi0;
    return l;
}

SpeedLaw SpeedLaw::launchpad(int k, int eps) {
    if (eps < 1 || k < 1 || k > eps) throw ModelError("launch-pad mode needs 1 <= k <= eps");
    SpeedLaw l;
    l.family = SpeedFamily::Launchpad;
    l.k = k;
    l.eps = eps;
    return l;
}

SpeedLaw SpeedLaw::flat(int n) {
    if (n < 1) throw ModelError("flat launch pad needs n >= 1");
    SpeedLaw l;
    l.family = SpeedFamily::Flat;
    l.n = n;
    return l;
}

namespace {

void check_support(double v) {
    if (!(v >= 0.0 && v <= 1.0)) throw ModelError("speed outside [0, 1]");
}

cplx sine_transform(const CVec& psi0, double p) {
    cplx acc = 0.0;
    for (Eigen::Index x = 0; x < psi0.size(); ++x) acc += std::sin(p * double(x + 1)) * psi0(x);
    return acc * std::sqrt(2.0 / kPi);
}

// Density times sqrt(1 - v^2), as a function of u = asin v; finite on [0, pi/2].
double reduced_density(const SpeedLaw& law, double u) {
    const double v = std::sin(u), c = std::cos(u);
    switch (law.family) {
        case SpeedFamily::M1: return 4.0 * v * v / kPi;
        case SpeedFamily::FromSite: {
            const double s = std::sin(law.x0 * u);
            return 4.0 * s * s / kPi;
        }
        case SpeedFamily::General:
            return std::norm(sine_transform(law.psi0, u)) + std::norm(sine_transform(law.psi0, kPi - u));
        case SpeedFamily::Launchpad: {
            const double e1 = law.eps + 1.0;
            const double q = law.k * kPi / e1;
            const double sq = std::sin(q), se = std::sin(e1 * u);
            const double den = 2.0 * v * v + std::cos(2.0 * q) - 1.0;  // = 2 (v^2 - sin^2 q)
            if (std::abs(den) < 1e-7) {
                // removable singularity at v = sin q: nudge symmetrically
                const double h = 1e-5;
                return 0.5 * (reduced_density(law, u - h) + reduced_density(law, u + h));
            }
            return 4.0 * (3.0 - 2.0 * v * v + std::cos(2.0 * q)) * sq * sq * se * se / (kPi * e1 * den * den);
        }
        case SpeedFamily::Flat: {
            const double s = std::sin(2.0 * law.n * u);
            if (c < 1e-8) return 0.0;  // sin^2(2nu) / cos^2 u -> 0 at u = pi/2
            return s * s / (kPi * law.n * c * c);
        }
    }
    return 0.0;
}

}  // namespace

double density(const SpeedLaw& law, double v) {
    check_support(v);
    if (v >= 1.0) return 0.0;
    return reduced_density(law, std::asin(v)) / std::sqrt(1.0 - v * v);
}

double cdf_from_site(int x0, double v) {
    if (x0 < 1) throw ModelError("starting site must be >= 1");
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    const double a = std::asin(v);
    return 2.0 * a / kPi - std::sin(2.0 * x0 * a) / (kPi * x0);
}

cplx characteristic_m1(double a) {
    const double T = std::abs(a);
    if (T < 1e-6) return {1.0, 0.0};
    const cplx phi = (2.0 / T) * cplx(bessel_j(1, T) - T * bessel_j(2, T), T * struve_h0(T) - struve_h1(T));
    return a < 0 ? std::conj(phi) : phi;
}

double mean_from_site(int x0) { return 8.0 / (4.0 * kPi - kPi / (double(x0) * x0)); }

double cdf(const SpeedLaw& law, double v) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    if (law.family == SpeedFamily::M1) return cdf_from_site(1, v);
    if (law.family == SpeedFamily::FromSite) return cdf_from_site(law.x0, v);
    return integrate_adaptive([&](double u) { return reduced_density(law, u); }, 0.0, std::asin(v), 1e-11);
}

Moments moments(const SpeedLaw& law) {
    auto mom = [&](int p) {
        return integrate_adaptive([&](double u) { return std::pow(std::sin(u), p) * reduced_density(law, u); }, 0.0,
                                  0.5 * kPi, 1e-12);
    };
    const double norm = mom(0);
    if (std::abs(norm - 1.0) > 1e-8) throw NumericsError("speed density does not normalize: " + std::to_string(norm));
    Moments m;
    m.mean = mom(1);
    m.second = mom(2);
    m.variance = m.second - m.mean * m.mean;
    return m;
}

double joint_density(double v1, double v2) {
    if (!(v1 > 0.0 && v1 < v2 && v2 < 1.0)) return 0.0;
    const double a = v1 * v1, b = v2 * v2;
    return 64.0 * a * b * (2.0 - a - b) / (kPi * kPi * std::sqrt((1.0 - a) * (1.0 - b)));
}

namespace {

// Joint density times sqrt((1-v1^2)(1-v2^2)) in arcsine variables.
double joint_reduced(double u1, double u2) {
    const double a = std::sin(u1), b = std::sin(u2);
    const double aa = a * a, bb = b * b;
    return 64.0 * aa * bb * (2.0 - aa - bb) / (kPi * kPi);
}

}  // namespace

double joint_normalization(double tol) {
    return integrate_adaptive(
        [&](double u2) {
            return integrate_adaptive([&](double u1) { return joint_reduced(u1, u2); }, 0.0, u2, 0.1 * tol);
        },
        0.0, 0.5 * kPi, tol);
}

double conditional_mean_joint(double v2) {
    if (!(v2 > 0.0 && v2 < 1.0)) throw ModelError("conditioning speed must lie in (0, 1)");
    const double u2 = std::asin(v2);
    const double z = integrate_adaptive([&](double u) { return joint_reduced(u, u2); }, 0.0, u2, 1e-14);
    const double m = integrate_adaptive([&](double u) { return std::sin(u) * joint_reduced(u, u2); }, 0.0, u2, 1e-14);
    return m / z;
}

EmpiricalSpeed empirical_speed(const MachineState& psi_t, double t) {
    if (!(t > 0)) throw ModelError("empirical speed needs t > 0");
    if (psi_t.basis->excitations() != 1) throw ModelError("empirical speed is defined for a single excitation");
    EmpiricalSpeed e;
    e.t = t;
    e.occupancy = site_occupancy(psi_t);
    double m1 = 0, m2 = 0;
    for (Eigen::Index i = 0; i < e.occupancy.size(); ++i) {
        const double x = double(i + 1);
        m1 += x * e.occupancy(i);
        m2 += x * x * e.occupancy(i);
    }
    e.mean = m1 / t;
    e.variance_q = m2 - m1 * m1;
    return e;
}

EmpiricalSpeed empirical_speed(const ProgramGraph& graph, const MachineState& psi0, double t) {
    return empirical_speed(propagate(graph, psi0, t), t);
}

double ks_distance(const EmpiricalSpeed& emp, const std::function<double(double)>& F) {
    double acc = 0.0, worst = 0.0;
    for (Eigen::Index i = 0; i < emp.occupancy.size(); ++i) {
        const double v = double(i + 1) / emp.t;
        const double f = F(v);
        worst = std::max(worst, std::abs(acc - f));  // left limit
        acc += emp.occupancy(i);
        worst = std::max(worst, std::abs(acc - f));
    }
    return worst;
}

CVec launchpad_state(LaunchpadKind kind, int param, int eps) {
    if (param < 1) throw ModelError("launch-pad parameter must be positive");
    switch (kind) {
        case LaunchpadKind::Eigen: {
            if (eps < 1 || param > eps) throw ModelError("eigen launch pad needs 1 <= k <= eps");
            CVec c(eps);
            for (int x = 1; x <= eps; ++x) c(x - 1) = std::sqrt(2.0 / (eps + 1)) * std::sin(param * kPi * x / (eps + 1));
            return c;
        }
        case LaunchpadKind::Flat: {
            const int n = param, len = 2 * n - 1;
            CVec c = CVec::Zero(len);
            for (int x = 1; x <= len; x += 2) c(x - 1) = std::sqrt(1.0 / n) * std::sin(kPi * x / 2.0);
            return c;
        }
        case LaunchpadKind::Gamma: {
            const int n = param, len = 2 * n - 1;
            CVec c = CVec::Zero(len);
            for (int x = 1; x <= len; x += 2)
                c(x - 1) = std::sqrt(2.0 / (3.0 * n)) * (1.0 + std::cos(kPi * x / (2.0 * n))) * std::sin(kPi * x / 2.0);
            return c;
        }
    }
    return {};
}

CVec launchpad_state_on_chain(LaunchpadKind kind, int param, int eps, int s) {
    const CVec c = launchpad_state(kind, param, eps);
    if (c.size() > s) throw ModelError("launch pad longer than the chain");
    CVec out = CVec::Zero(s);
    out.head(c.size()) = c;
    return out;
}

}  // namespace csim
