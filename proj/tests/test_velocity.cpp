#include <doctest.h>

#include <cmath>

#include "cursor_sim/builders.hpp"
#include "cursor_sim/velocity.hpp"

using namespace csim;

namespace {

std::shared_ptr<const ExcitationBasis> sector(int s, int k) { return std::make_shared<const ExcitationBasis>(s, k); }

// composite Simpson in u = asin v; g(u) already includes cos u
double simpson_u(const std::function<double(double)>& g, int n = 40000) {
    const double a = 0, b = kPi / 2, h = (b - a) / n;
    double acc = g(a) + g(b);
    for (int i = 1; i < n; ++i) acc += g(a + i * h) * (i % 2 ? 4 : 2);
    return acc * h / 3;
}

double fm1(double v) { return 4 * v * v / (kPi * std::sqrt(1 - v * v)); }

MachineState chain_start(int s, const CVec& cursor) {
    const ProgramGraph g = build_identity_chain(s, 1.0);
    return MachineState::product(sector(s, 1), g.reg, CVec::Ones(1), cursor);
}

}  // namespace

TEST_CASE("densities") {
    for (double v : {0.01, 0.2, 0.5, 0.77, 0.99}) {
        CHECK(density(SpeedLaw::m1(), v) == doctest::Approx(fm1(v)).epsilon(1e-14));
        CHECK(std::abs(density(SpeedLaw::from_site(1), v) - density(SpeedLaw::m1(), v)) < 1e-12);
        const double x0 = 3, sa = std::sin(x0 * std::asin(v));
        CHECK(density(SpeedLaw::from_site(3), v) ==
              doctest::Approx(4 * sa * sa / (kPi * std::sqrt(1 - v * v))).epsilon(1e-12));
    }
    for (int i = 1; i < 100; ++i) {
        const double v = i / 100.0;
        CHECK(std::abs(density(SpeedLaw::from_site(1), v) - fm1(v)) < 1e-12);
    }
    CHECK_THROWS(density(SpeedLaw::m1(), 1.5));
    CHECK_THROWS(density(SpeedLaw::m1(), -0.1));

    // flat(5): sin^2(2n asin v) / (pi n (1 - v^2)^{3/2}); in u this is regular
    const int n = 5;
    for (double v : {0.1, 0.4, 0.8})
        CHECK(density(SpeedLaw::flat(n), v) ==
              doctest::Approx(std::pow(std::sin(2 * n * std::asin(v)), 2) / (kPi * n * std::pow(1 - v * v, 1.5)))
                  .epsilon(1e-10));
    const double norm = simpson_u([&](double u) {
        const double c = std::cos(u);
        return c < 1e-12 ? 4 * n / kPi : std::pow(std::sin(2 * n * u), 2) / (kPi * n * c * c);
    });
    CHECK(std::abs(norm - 1) < 1e-8);

    // general law from a single-site start reduces to M1
    CVec one = CVec::Zero(1);
    one(0) = 1;
    for (double v : {0.15, 0.6, 0.9})
        CHECK(density(SpeedLaw::general(one), v) == doctest::Approx(fm1(v)).epsilon(1e-10));
}

TEST_CASE("every univariate law integrates to one with a monotone CDF") {
    CVec psi(3);
    psi << 0.6, cplx(0, 0.64), -0.48;
    for (const SpeedLaw& law : {SpeedLaw::m1(), SpeedLaw::from_site(2), SpeedLaw::from_site(5), SpeedLaw::flat(3),
                                SpeedLaw::flat(10), SpeedLaw::launchpad(2, 9), SpeedLaw::general(psi)}) {
        CHECK(cdf(law, 0) == doctest::Approx(0.0));
        CHECK(std::abs(cdf(law, 1) - 1) < 1e-8);
        double prev = 0;
        for (int i = 1; i <= 50; ++i) {
            const double c = cdf(law, i / 50.0);
            CHECK(c >= prev - 1e-12);
            prev = c;
        }
    }
}

TEST_CASE("moments") {
    const Moments m = moments(SpeedLaw::m1());
    CHECK(std::abs(m.mean - 8 / (3 * kPi)) < 1e-9);
    CHECK(std::abs(m.variance - (0.75 - std::pow(8 / (3 * kPi), 2))) < 1e-9);
    for (int x0 : {1, 2, 5}) {
        CHECK(std::abs(moments(SpeedLaw::from_site(x0)).mean - 8 / (4 * kPi - kPi / (x0 * x0))) < 1e-8);
        CHECK(std::abs(mean_from_site(x0) - 8 / (4 * kPi - kPi / (x0 * x0))) < 1e-15);
    }
    CHECK(std::abs(moments(SpeedLaw::from_site(400)).mean - 2 / kPi) < 1e-5);
    for (int n : {3, 5, 10}) CHECK(std::abs(moments(SpeedLaw::flat(n)).second - (1 - 1.0 / (4 * n))) < 1e-9);
    for (int n : {5, 10, 20})
        CHECK(moments(SpeedLaw::flat(n)).variance == doctest::Approx((4 - kPi) / (4 * kPi * n)).epsilon(0.05));
}

TEST_CASE("CDF from site") {
    CHECK(cdf_from_site(3, 1.0) == 1.0);
    CHECK(cdf_from_site(3, 1.7) == 1.0);
    CHECK(cdf_from_site(3, -0.2) == 0.0);
    CHECK(cdf_from_site(1, std::sin(kPi / 4)) == doctest::Approx((kPi / 2 - 1) / kPi).epsilon(1e-14));
    for (int x0 : {1, 2, 7})
        for (int i = 1; i <= 50; ++i) {
            const double v = i / 51.0, h = 1e-6;
            const double fd = (cdf_from_site(x0, v + h) - cdf_from_site(x0, v - h)) / (2 * h);
            CHECK(std::abs(fd - density(SpeedLaw::from_site(x0), v)) < 1e-6 * std::max(1.0, fd));
            CHECK(std::abs(cdf(SpeedLaw::from_site(x0), v) - cdf_from_site(x0, v)) < 1e-8);
        }
}

TEST_CASE("characteristic function of the M1 law") {
    for (double a : {-7.0, -0.5, 0.0, 1.3, 9.0, 40.0}) {
        const double re = simpson_u([&](double u) { return std::cos(a * std::sin(u)) * 4 * std::pow(std::sin(u), 2) / kPi; });
        const double im = simpson_u([&](double u) { return std::sin(a * std::sin(u)) * 4 * std::pow(std::sin(u), 2) / kPi; });
        CHECK(std::abs(characteristic_m1(a) - cplx(re, im)) < 1e-9);
    }
}

TEST_CASE("joint law of two hands") {
    CHECK(std::abs(joint_normalization() - 1) < 1e-6);
    CHECK(joint_density(0.5, 0.3) == 0.0);  // v1 < v2 only
    CHECK(std::abs(conditional_mean_joint(0.1) - 0.075) < 2e-4);
    const double v = 0.3;
    CHECK(std::abs(conditional_mean_joint(v) - 0.75 * v) <= std::pow(v, 5));
    double prev = 0;
    for (int i = 1; i <= 50; ++i) {
        const double c = conditional_mean_joint(i / 51.0);
        CHECK(c >= prev);
        prev = c;
    }
}

TEST_CASE("empirical speed on the chain") {
    const int s = 200;
    const ProgramGraph g = build_identity_chain(s, 1.0);
    const MachineState m1 = chain_start(s, launchpad_state_on_chain(LaunchpadKind::Eigen, 1, 1, s));
    const Moments mm = moments(SpeedLaw::m1());
    const EmpiricalSpeed e = empirical_speed(g, m1, 100);
    CHECK(std::abs(e.mean - 8 / (3 * kPi)) <= 0.02);
    CHECK(std::abs(e.occupancy.sum() - 1) < 1e-10);
    for (double t : {40.0, 100.0, 150.0})
        CHECK(empirical_speed(g, m1, t).variance_q == doctest::Approx(t * t * mm.variance).epsilon(0.10));

    const MachineState flat = chain_start(s, launchpad_state_on_chain(LaunchpadKind::Flat, 5, 9, s));
    CHECK(std::abs(empirical_speed(g, flat, 100).mean - moments(SpeedLaw::flat(5)).mean) <= 0.02);

}

TEST_CASE("KS distance of the lattice law") {
    // semi-infinite chain from site 1: c(t, x) ~ (2x/t) J_x(t)
    auto m1cdf = [](double v) { return cdf(SpeedLaw::m1(), v); };
    double prev_ks = 1;
    for (double t : {50.0, 200.0}) {
        const int s = int(2 * t);
        const EmpiricalSpeed e = empirical_speed(build_identity_chain(s, 1.0),
                                                 chain_start(s, launchpad_state_on_chain(LaunchpadKind::Eigen, 1, 1, s)), t);
        double acc = 0, ks = 0;
        for (int x = 1; x <= s; ++x) {
            const double p = std::pow(2 * x / t * std::cyl_bessel_j(double(x), t), 2);
            CHECK(std::abs(e.occupancy(x - 1) - p) < 1e-10);
            const double f = m1cdf(x / t);
            ks = std::max({ks, std::abs(acc - f), std::abs(acc + p - f)});
            acc += p;
        }
        const double got = ks_distance(e, m1cdf);
        CHECK(std::abs(got - ks) < 1e-9);
        // the Airy front shrinks like t^{-1/3}
        CHECK(got < prev_ks);
        prev_ks = got;
        MESSAGE("t=" << t << " KS=" << got);
    }
    EmpiricalSpeed step;
    step.t = 1;
    step.occupancy = RVec::Zero(2);
    step.occupancy(0) = 1;
    CHECK(ks_distance(step, [](double v) { return v >= 1 ? 1.0 : 0.0; }) == 1.0);
}

TEST_CASE("launch pads") {
    for (int n : {2, 5, 8}) {
        const CVec f = launchpad_state(LaunchpadKind::Flat, n);
        REQUIRE(f.size() == 2 * n - 1);
        CHECK(std::abs(f.norm() - 1) < 1e-14);
        double q = 0, q2 = 0;
        for (int x = 1; x <= f.size(); ++x) q += x * std::norm(f(x - 1)), q2 += double(x) * x * std::norm(f(x - 1));
        // the alternating odd-site packet
        CHECK(std::abs(f(1)) == 0.0);
        CHECK(std::abs(q - n) < 1e-12);
        CHECK(std::abs(q2 - q * q - (n * n - 1) / 3.0) < 1e-10);
        const CVec gm = launchpad_state(LaunchpadKind::Gamma, n);
        CHECK(std::abs(gm.norm() - 1) < 1e-12);
        CHECK(std::abs(std::abs(f.dot(gm)) - std::sqrt(2.0 / 3)) < 1e-12);
    }
    for (int k : {1, 3}) {
        const int eps = 9;
        const CVec e = launchpad_state(LaunchpadKind::Eigen, k, eps);
        const ProgramGraph g = build_identity_chain(eps, 1.0);
        const CVec he = assemble_hamiltonian(g, 1).apply(e);
        CHECK((he + std::cos(k * kPi / (eps + 1)) * e).norm() < 1e-10);
    }
    CHECK(launchpad_state_on_chain(LaunchpadKind::Flat, 3, 5, 20).size() == 20);
}
