#include <doctest.h>

#include <cmath>

#include "cursor_sim/builders.hpp"
#include "cursor_sim/grover.hpp"
#include "cursor_sim/observables.hpp"
#include "cursor_sim/peres.hpp"

using namespace csim;

namespace {

std::shared_ptr<const ExcitationBasis> sector(int s, int k) { return std::make_shared<const ExcitationBasis>(s, k); }

cplx c_direct(double t, int x, int s, double lambda) {
    cplx acc = 0;
    for (int k = 1; k <= s; ++k) {
        const double q = k * kPi / (s + 1);
        acc += std::exp(kI * lambda * t * std::cos(q)) * std::sin(q) * std::sin(q * x);
    }
    return 2.0 / (s + 1) * acc;
}

CMat partial_trace_loops(const MachineState& m) {
    const std::size_t d = m.reg.dim();
    CMat rho = CMat::Zero(d, d);
    for (std::size_t c = 0; c < m.basis->size(); ++c)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) rho(a, b) += m.amp(c * d + a) * std::conj(m.amp(c * d + b));
    return rho;
}

double entropy_2x2(double r) {
    double s = 0;
    for (double l : {(1 + r) / 2, (1 - r) / 2})
        if (l > 0) s -= l * std::log(l);
    return s;
}

struct Toy {
    GroverParams gp = grover_params(7);
    ProgramGraph g;
    MachineState psi0;
    std::unique_ptr<Propagator> prop;
    explicit Toy(double lambda = 1.0, bool alternating = false) {
        g = alternating ? build_toy_alternating(gp.sites(), gp.mu, lambda) : build_toy_chain(gp.sites(), gp.alpha, lambda);
        psi0 = MachineState::product_at(sector(gp.sites(), 1), g.reg, toy_register_state(gp.theta), {1});
        prop = std::make_unique<Propagator>(g, psi0.basis);
    }
    MachineState at(double t) const { return prop->evolve(psi0, t); }
};

}  // namespace

TEST_CASE("cursor distribution") {
    const ProgramGraph g = build_identity_chain(9, 2.0);
    const MachineState m = MachineState::product_at(sector(9, 1), g.reg, CVec::Ones(1), {1});
    const RVec p0 = cursor_distribution(m);
    CHECK(p0(0) == 1.0);
    CHECK(p0.sum() == 1.0);
    const RVec p = cursor_distribution(propagate(g, m, 2.7));
    for (int x = 1; x <= 9; ++x) CHECK(std::abs(p(x - 1) - std::norm(c_direct(2.7, x, 9, 2.0))) < 1e-10);

    const auto b2 = sector(9, 2);
    const MachineState two = MachineState::product_at(b2, g.reg, CVec::Ones(1), {1, 2});
    const MachineState later = propagate(g, two, 3.0);
    CHECK(std::abs(cursor_distribution(later).sum() - 1) < 1e-12);
    CHECK(std::abs(site_occupancy(later).sum() - 2) < 1e-12);
    CHECK(std::abs(position_marginal(later, 1).sum() - 1) < 1e-12);
    CHECK(position_marginal(later, 2)(0) == doctest::Approx(0.0));  // the right excitation never sits at site 1
}

TEST_CASE("register density and entropy") {
    SUBCASE("product state is pure") {
        const ProgramGraph g = build_toy_chain(5, 0.3);
        const MachineState m = MachineState::product_at(sector(5, 1), g.reg, toy_register_state(1.0), {2});
        const CMat rho = register_density(m);
        CHECK(std::abs(von_neumann_entropy(rho)) < 1e-12);
        CHECK(std::abs(rho.trace() - 1.0) < 1e-14);
    }
    SUBCASE("toy model at t = 30") {
        const Toy toy;
        const MachineState m = toy.at(30);
        const CMat rho = register_density(m);
        CHECK((rho - partial_trace_loops(m)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs(von_neumann_entropy(rho) - von_neumann_entropy(cursor_density(m))) < 1e-9);
        const BlochState b = bloch_polar(rho);
        CHECK(std::abs(von_neumann_entropy(rho) - entropy_from_radius(b.r)) < 1e-10);
        CHECK(std::abs(entropy_from_radius(b.r) - entropy_2x2(b.r)) < 1e-14);
        const Eigen::SelfAdjointEigenSolver<CMat> es(rho);
        CHECK(std::abs(es.eigenvalues()(1) - (1 + b.r) / 2) < 1e-10);
        CHECK(es.eigenvalues().minCoeff() > -1e-10);
    }
    SUBCASE("closed forms") {
        CHECK(std::abs(entropy_from_radius(0) - std::log(2.0)) < 1e-15);
        CHECK(entropy_from_radius(1) == 0.0);
        CHECK(std::abs(von_neumann_entropy(0.5 * CMat::Identity(2, 2)) - std::log(2.0)) < 1e-14);
    }
}

TEST_CASE("Bloch coordinates") {
    CMat up = CMat::Zero(2, 2);
    up(0, 0) = 1;
    const BlochState b = bloch_polar(up);
    CHECK(b.s3 == 1.0);
    CHECK(b.r == 1.0);
    CHECK(b.gamma == 0.0);
    CHECK_FALSE(b.degenerate);

    BlochState prev;
    prev.gamma = 1.25;
    const BlochState mixed = bloch_polar(0.5 * CMat::Identity(2, 2), &prev);
    CHECK(mixed.r == 0.0);
    CHECK(mixed.degenerate);
    CHECK(mixed.gamma == 1.25);

    // gamma is unwrapped along a rotating series
    std::vector<CMat> rhos;
    for (int i = 0; i <= 40; ++i) {
        const CVec v = toy_register_state(0.3 * i);
        rhos.push_back(v * v.adjoint());
    }
    const auto series = bloch_series(rhos);
    for (int i = 0; i <= 40; ++i) CHECK(std::abs(series[i].gamma - 0.3 * i) < 1e-12);
    CHECK_THROWS(bloch_polar(CMat::Identity(4, 4) / 4.0));
}

TEST_CASE("toy model against the Bessel-Struve approximation") {
    const Toy toy;
    double err = 0;
    for (double t = 20; t <= 120; t += 1) {
        const BlochState b = bloch_polar(register_density(toy.at(t)));
        err = std::max(err, std::abs(b.r - std::abs(toy_bloch_approx(t, toy.gp.theta, toy.gp.alpha, 1.0))));
    }
    CHECK(err <= 0.02);
}

TEST_CASE("Lindblad residual") {
    const Toy toy;
    auto residual = [&](double h) {
        std::vector<CMat> rhos;
        for (double t = 5; t <= 60 + 1e-9; t += h) rhos.push_back(register_density(toy.at(t)));
        return lindblad_residual(bloch_series(rhos), rhos, h);
    };
    const double r1 = residual(0.01), r2 = residual(0.005);
    CHECK(r2 <= 1e-3);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.125));

    // frozen register: both terms vanish
    const ProgramGraph g = build_linear_chain(10, std::vector<Primitive>(9, Primitive::identity()), toy.g.reg);
    const MachineState m = MachineState::product_at(sector(10, 1), g.reg, toy_register_state(0.8), {1});
    std::vector<CMat> rhos;
    for (int i = 0; i < 50; ++i) rhos.push_back(register_density(propagate(g, m, 0.01 * i)));
    CHECK(lindblad_residual(bloch_series(rhos), rhos, 0.01) <= 1e-10);
    std::vector<CMat> mixed(5, CMat(0.5 * CMat::Identity(2, 2)));
    CHECK_THROWS(lindblad_residual(bloch_series(mixed), mixed, 0.01));
}

TEST_CASE("entropy minimum tracks the success maximum on the alternating chain") {
    const Toy alt(1.0, true);
    const double h = 0.05;
    int first_smin = -1, first_pmax = -1;
    std::vector<double> S, P;
    for (int i = 0; i * h <= 60; ++i) {
        const CMat rho = register_density(alt.at(i * h));
        S.push_back(von_neumann_entropy(rho));
        P.push_back(rho(0, 0).real());
    }
    for (std::size_t i = 1; i + 1 < S.size(); ++i) {
        if (first_smin < 0 && S[i] < S[i - 1] && S[i] <= S[i + 1] && i * h > 1) first_smin = int(i);
        if (first_pmax < 0 && P[i] > P[i - 1] && P[i] >= P[i + 1] && i * h > 1) first_pmax = int(i);
    }
    REQUIRE(first_smin > 0);
    REQUIRE(first_pmax > 0);
    MESSAGE("entropy min at t=" << first_smin * h << ", success max at t=" << first_pmax * h);
    CHECK(std::abs(first_smin - first_pmax) <= 2);
}

TEST_CASE("projective measurement and energy distributions") {
    const Toy toy;
    const double tau = 10.84;
    const MachineState m = toy.at(tau);
    const CMat P = 0.5 * (sigma(0) + sigma(3));
    const auto out = measure_projector(m, P);
    REQUIRE(out.size() == 2);
    CHECK(std::abs(out[0].probability + out[1].probability - 1) < 1e-12);
    REQUIRE(out[0].collapsed);
    REQUIRE(out[1].collapsed);
    CHECK(std::abs(out[0].collapsed->amp.dot(out[1].collapsed->amp)) < 1e-14);
    const int s = toy.gp.sites();
    // collapsed cursor amplitudes ~ c(tau, x) cos((theta + (x-1) alpha) / 2) and sin(...)
    const double a = toy.gp.alpha, th = toy.gp.theta;
    CVec plus(s), minus(s);
    for (int x = 1; x <= s; ++x) {
        const cplx c = c_direct(tau, x, s, 1.0);
        plus(x - 1) = c * std::cos((th + (x - 1) * a) / 2);
        minus(x - 1) = c * std::sin((th + (x - 1) * a) / 2);
    }
    CVec got_p(s), got_m(s);
    for (int x = 0; x < s; ++x) {
        got_p(x) = out[0].collapsed->amp(2 * x);
        got_m(x) = out[1].collapsed->amp(2 * x + 1);
    }
    CHECK(std::abs(std::abs(plus.normalized().dot(got_p)) - 1) < 1e-10);
    CHECK(std::abs(std::abs(minus.normalized().dot(got_m)) - 1) < 1e-10);

    const SpectralDecomposition& dec = toy.prop->spectrum();
    auto total = [](const std::vector<EnergyLevel>& e) {
        double acc = 0;
        for (const auto& l : e) acc += l.probability;
        return acc;
    };
    const auto before = energy_distribution(m.amp, dec);
    const auto p1 = energy_distribution(out[0].collapsed->amp, dec);
    const auto p2 = energy_distribution(out[1].collapsed->amp, dec);
    CHECK(std::abs(total(before) - 1) < 1e-10);
    CHECK(std::abs(total(p1) - 1) < 1e-10);
    CHECK(std::abs(total(p2) - 1) < 1e-10);
    // before measurement the levels carry (2/(s+1)) sin^2(k pi/(s+1)) twice (double degeneracy)
    REQUIRE(before.size() == std::size_t(s));
    for (int k = 1; k <= s; ++k) {
        const double e = -std::cos(k * kPi / (s + 1));
        const double w = 2.0 / (s + 1) * std::pow(std::sin(k * kPi / (s + 1)), 2);
        bool found = false;
        for (const auto& l : before)
            if (std::abs(l.energy - e) < 1e-9) {
                found = true;
                CHECK(std::abs(l.probability - w) < 1e-10);
            }
        CHECK(found);
    }
    // conserved in time
    const auto later = energy_distribution(toy.at(tau + 17).amp, dec);
    for (std::size_t i = 0; i < later.size(); ++i) CHECK(std::abs(later[i].probability - before[i].probability) < 1e-10);
    // the minus branch exchanges energy
    double tv = 0;
    for (std::size_t i = 0; i < p2.size(); ++i) tv += 0.5 * std::abs(p2[i].probability - before[i].probability);
    CHECK(tv > 0.1);

    SUBCASE("degenerate outcomes and bad projectors") {
        const auto all = measure_projector(m, CMat::Identity(2, 2));
        CHECK(all[0].probability == doctest::Approx(1.0));
        CHECK(all[1].probability == 0.0);
        CHECK_FALSE(all[1].collapsed.has_value());
        CHECK_THROWS(measure_projector(m, sigma(1)));
    }
    SUBCASE("eigenstate is a point mass") {
        const auto e = energy_distribution(dec.eigenvectors.col(7), dec);
        double mx = 0;
        for (const auto& l : e) mx = std::max(mx, l.probability);
        CHECK(mx == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("Grover success probability") {
    CHECK(grover_success_probability(0, 33, 5, 1.0) == doctest::Approx(1.0 / 32).epsilon(1e-12));
    // against the full machine on the Grover line
    const int mu = 3;
    const GroverParams p = grover_params(mu);
    const ProgramGraph g = build_grover_line(mu, p.sites(), p.target, 1.0);
    const MachineState psi = MachineState::product_at(sector(p.sites(), 1), g.reg, grover_initial_register(mu), {1});
    const std::size_t w = g.reg.index_of({1, 1, 1, 1}), w2 = g.reg.index_of({1, 1, 1, -1});
    for (double t : {2.0, 6.5, 13.0}) {
        const CMat rho = register_density(propagate(g, psi, t));
        const double full = (rho(w, w) + rho(w2, w2)).real();
        CHECK(std::abs(grover_success_probability(t, p.sites(), mu, 1.0) - full) < 1e-10);
    }
    // damping
    const int s = 33;
    double avg = 0, n = 0, best = 0;
    for (double t = 2 * s; t <= 6 * s; t += 0.25) avg += grover_success_probability(t, s, 5, 1.0), n += 1;
    for (int k = 0; 2 * k + 1 <= s; ++k) best = std::max(best, std::pow(std::sin((2 * k + 1) * grover_params(5).chi), 2));
    CHECK(avg / n < best - 0.05);
}

TEST_CASE("telomere bound") {
    const double u = 1.0 / (1 + 2 * 10.0 / 20);
    CHECK(std::abs(telomere_bound(20, 10) - (1 - 2 / kPi * (std::asin(u) - u * std::sqrt(1 - u * u)))) < 1e-15);
    CHECK(telomere_bound(20, 10) == doctest::Approx(0.94233).epsilon(1e-5));
}
