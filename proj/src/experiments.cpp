#include "cursor_sim/experiments.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "cursor_sim/builders.hpp"
#include "cursor_sim/grover.hpp"
#include "cursor_sim/observables.hpp"
#include "cursor_sim/peres.hpp"
#include "cursor_sim/stochastic.hpp"
#include "cursor_sim/velocity.hpp"

namespace csim {

namespace fs = std::filesystem;

namespace {

std::vector<double> time_grid(double t_max, double step) {
    if (!(step > 0) || !(t_max > 0)) throw ModelError("time grid needs positive t_max and step");
    const auto n = static_cast<std::size_t>(std::llround(t_max / step));
    std::vector<double> t(n + 1);
    for (std::size_t i = 0; i <= n; ++i) t[i] = i * step;
    return t;
}

double or_default(double v, double d) { return v > 0 ? v : d; }

Table make_table(std::string name, std::vector<std::string> cols) {
    Table t;
    t.name = std::move(name);
    t.columns = std::move(cols);
    return t;
}

std::shared_ptr<const ExcitationBasis> sector(int s, int k) { return std::make_shared<const ExcitationBasis>(s, k); }

MachineState start_at_site(const ProgramGraph& g, const CVec& reg_state, int site = 1) {
    return MachineState::product_at(sector(g.sites, 1), g.reg, reg_state, {site});
}

double mass_on(const RVec& occ, const std::vector<int>& sites) {
    double p = 0;
    for (int x : sites) p += occ(x - 1);
    return p;
}

// ---------------------------------------------------------------------------------------------

RunResult run_chain(const ExperimentConfig& c) {
    const ProgramGraph g = build_identity_chain(c.s, c.lambda);
    const auto basis = sector(c.s, 1);
    const Propagator prop(g, basis);
    RunResult res;
    Table spec = make_table("spectrum.csv", {"k", "eigenvalue"});
    // ascending eigenvalue k-th equals -lambda cos(k pi / (s+1))
    for (Eigen::Index k = 0; k < prop.spectrum().eigenvalues.size(); ++k)
        spec.add({static_cast<long long>(k + 1), prop.spectrum().eigenvalues(k)});
    Table amp = make_table("amplitudes.csv", {"t", "x", "re", "im", "prob", "bessel_prob"});
    const MachineState psi0 = start_at_site(g, CVec::Ones(1));
    const SpectralEvolver ev(prop.spectrum(), psi0.amp);
    for (double t : time_grid(or_default(c.t_max, 15.0), or_default(c.t_step, 0.1))) {
        const CVec a = ev.at(t);
        for (int x = 1; x <= c.s; ++x) {
            const cplx z = a(x - 1);
            amp.add({t, static_cast<long long>(x), z.real(), z.imag(), std::norm(z),
                     std::norm(bessel_amplitude(t, x, 1, c.lambda))});
        }
    }
    res.tables = {spec, amp};
    res.plots = {{0, "k", {"eigenvalue"}}};
    return res;
}

RunResult run_telomere(const ExperimentConfig& c, bool pulsed) {
    const ProgramGraph g = build_trap(c.s, c.delta, c.double_trap && !pulsed, c.lambda);
    CVec ctrl(2);
    if (c.double_trap && !pulsed) ctrl << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    else ctrl << 1.0, 0.0;  // sigma3 = +1
    const MachineState psi0 = start_at_site(g, ctrl);
    const auto grid = time_grid(or_default(c.t_max, pulsed ? 3.0 * c.s : 6.0 * c.s), or_default(c.t_step, 0.1));
    const Propagator prop(g, psi0.basis);
    const SpectralEvolver ev(prop.spectrum(), psi0.amp);
    auto occupancy = [&](const CVec& amp) {
        MachineState m = psi0;
        m.amp = amp;
        return site_occupancy(m);
    };
    RunResult res;
    if (!pulsed) {
        Table t = make_table("telomere.csv", {"t", "p_active", "p_telomere", "p_telomere2", "bound"});
        const double bound = telomere_bound(c.s, c.delta);
        for (double tt : grid) {
            const RVec occ = occupancy(ev.at(tt));
            const double p2 = g.metadata.count("telomere2") ? mass_on(occ, g.metadata.at("telomere2")) : 0.0;
            t.add({tt, mass_on(occ, g.metadata.at("active")), mass_on(occ, g.metadata.at("telomere")), p2, bound});
        }
        res.tables = {t};
        res.plots = {{0, "t", {"p_active", "p_telomere", "p_telomere2", "bound"}}};
        return res;
    }
    Pulse pulse;
    pulse.t0 = c.pulse_t0;
    pulse.width = c.pulse_width;
    const PulsedPropagator pp(g, pulse, psi0);
    Table t = make_table("pipulse.csv", {"t", "p_telomere", "p_telomere_free"});
    for (double tt : grid) {
        const RVec occ = site_occupancy(pp.at(tt));
        t.add({tt, mass_on(occ, g.metadata.at("telomere")), mass_on(occupancy(ev.at(tt)), g.metadata.at("telomere"))});
    }
    res.tables = {t};
    res.plots = {{0, "t", {"p_telomere", "p_telomere_free"}}};
    return res;
}

RunResult run_grover_damping(const ExperimentConfig& c) {
    const GroverParams gp = grover_params(c.mu);
    const ProgramGraph g = build_toy_alternating(c.s, c.mu, c.lambda);
    const MachineState psi0 = start_at_site(g, toy_register_state(gp.theta));
    const Propagator prop(g, psi0.basis);
    const SpectralEvolver ev(prop.spectrum(), psi0.amp);
    Table gr = make_table("grover.csv", {"t", "p_target", "p_wrong", "lambda1", "lambda2", "entropy"});
    Table dm = make_table("damping.csv", {"t", "p_success"});
    for (double t : time_grid(or_default(c.t_max, 6.0 * c.s), or_default(c.t_step, 0.5))) {
        MachineState m = psi0;
        m.amp = ev.at(t);
        const CMat rho = register_density(m);
        const BlochState b = bloch_polar(rho);
        gr.add({t, rho(0, 0).real(), rho(1, 1).real(), 0.5 * (1 + b.r), 0.5 * (1 - b.r), von_neumann_entropy(rho)});
        dm.add({t, grover_success_probability(t, c.s, c.mu, c.lambda)});
    }
    RunResult res;
    res.tables = {gr, dm};
    res.plots = {{0, "t", {"p_target", "entropy"}}, {1, "t", {"p_success"}}};
    return res;
}

struct ToyRun {
    GroverParams gp;
    ProgramGraph graph;
    MachineState psi0;
    std::unique_ptr<Propagator> prop;
};

ToyRun toy_run(const ExperimentConfig& c) {
    ToyRun r{grover_params(c.mu), {}, {}, nullptr};
    r.graph = build_toy_chain(c.s, r.gp.alpha, c.lambda);
    r.psi0 = start_at_site(r.graph, toy_register_state(r.gp.theta));
    r.prop = std::make_unique<Propagator>(r.graph, r.psi0.basis);
    return r;
}

RunResult run_toy_bloch(const ExperimentConfig& c) {
    const ToyRun tr = toy_run(c);
    const SpectralEvolver ev(tr.prop->spectrum(), tr.psi0.amp);
    Table b = make_table("bloch.csv", {"t", "s1", "s2", "s3", "r", "gamma", "entropy", "p_target", "lambda1"});
    Table a = make_table("bloch_approx.csv", {"t", "r", "gamma", "r_approx", "gamma_approx"});
    BlochState prev;
    bool first = true;
    double gprev = 0;
    for (double t : time_grid(or_default(c.t_max, double(c.s)), or_default(c.t_step, 0.1))) {
        MachineState m = tr.psi0;
        m.amp = ev.at(t);
        const CMat rho = register_density(m);
        const BlochState s = bloch_polar(rho, first ? nullptr : &prev);
        const cplx z = toy_bloch_approx(t, tr.gp.theta, tr.gp.alpha, c.lambda);
        double ga = std::arg(z);
        ga += 2 * kPi * std::round(((first ? s.gamma : gprev) - ga) / (2 * kPi));
        b.add({t, s.s1, s.s2, s.s3, s.r, s.gamma, von_neumann_entropy(rho), rho(0, 0).real(), 0.5 * (1 + s.r)});
        a.add({t, s.r, s.gamma, std::abs(z), ga});
        prev = s;
        gprev = ga;
        first = false;
    }
    RunResult res;
    res.tables = {b, a};
    res.plots = {{0, "t", {"r", "entropy", "p_target"}}, {1, "t", {"r", "r_approx"}}};
    return res;
}

RunResult run_launchpad(const ExperimentConfig& c) {
    const int n = c.launch_n, eps = 2 * n - 1;
    if (eps >= c.s) throw ModelError("launch pad does not fit in the chain");
    SpeedLaw law;
    LaunchpadKind kind = LaunchpadKind::Flat;
    int param = n;
    if (c.launch_kind == "flat") {
        law = SpeedLaw::flat(n);
    } else if (c.launch_kind == "eigen") {
        kind = LaunchpadKind::Eigen;
        param = c.launch_k;
        law = SpeedLaw::launchpad(c.launch_k, eps);
    } else {
        kind = LaunchpadKind::Gamma;
        law = SpeedLaw::general(launchpad_state(LaunchpadKind::Gamma, n, eps));
    }
    Table sp = make_table("speed.csv", {"v", "density", "cdf"});
    for (int i = 0; i <= 200; ++i) {
        const double v = i / 200.0;
        sp.add({v, density(law, v), cdf(law, v)});
    }
    const Moments mom = moments(law);
    const ProgramGraph g = build_identity_chain(c.s, c.lambda);
    const auto basis = sector(c.s, 1);
    const MachineState psi0 =
        MachineState::product(basis, g.reg, CVec::Ones(1), launchpad_state_on_chain(kind, param, eps, c.s));
    const Propagator prop(g, basis);
    const SpectralEvolver ev(prop.spectrum(), psi0.amp);
    Table em = make_table("empirical.csv", {"t", "mean_q", "var_q", "var_fit"});
    for (double t : time_grid(or_default(c.t_max, double(c.s - eps) / c.lambda), or_default(c.t_step, 0.5))) {
        MachineState m = psi0;
        m.amp = ev.at(t);
        const RVec occ = site_occupancy(m);
        double m1 = 0, m2 = 0;
        for (int x = 1; x <= c.s; ++x) m1 += x * occ(x - 1), m2 += double(x) * x * occ(x - 1);
        em.add({t, m1, m2 - m1 * m1, std::pow(c.lambda * t, 2) * mom.variance});
    }
    RunResult res;
    res.tables = {sp, em};
    res.plots = {{0, "v", {"density", "cdf"}}, {1, "t", {"var_q", "var_fit"}}};
    return res;
}

RunResult run_measurement(const ExperimentConfig& c) {
    const ToyRun tr = toy_run(c);
    const SpectralEvolver ev(tr.prop->spectrum(), tr.psi0.amp);
    const double step = or_default(c.t_step, 0.01);
    const auto grid = time_grid(or_default(c.t_max, double(c.s)), step);
    std::optional<double> tau;
    BlochState prev = bloch_polar(register_density(tr.psi0));
    for (std::size_t i = 1; i < grid.size() && !tau; ++i) {
        MachineState m = tr.psi0;
        m.amp = ev.at(grid[i]);
        const BlochState b = bloch_polar(register_density(m));
        if (b.s3 > 0 && ((prev.s1 > 0) != (b.s1 > 0))) tau = grid[i];
        prev = b;
    }
    if (!tau) throw ModelError("no gamma = 0 crossing inside the time window");
    MachineState at_tau = tr.psi0;
    at_tau.amp = ev.at(*tau);
    const CMat P = 0.5 * (sigma(0) + sigma(3));
    const auto outcomes = measure_projector(at_tau, P);
    Table ms = make_table("measurement.csv", {"outcome", "probability", "tau"});
    ms.add({std::string("plus"), outcomes[0].probability, *tau});
    ms.add({std::string("minus"), outcomes[1].probability, *tau});

    const SpectralDecomposition& dec = tr.prop->spectrum();
    const auto before = energy_distribution(at_tau.amp, dec);
    auto dist = [&](const MeasurementOutcome& o) {
        std::vector<EnergyLevel> e;
        if (o.collapsed) e = energy_distribution(o.collapsed->amp, dec);
        return e;
    };
    const auto plus = dist(outcomes[0]), minus = dist(outcomes[1]);
    Table en = make_table("energy.csv", {"energy", "p_before", "p_plus", "p_minus"});
    for (std::size_t k = 0; k < before.size(); ++k)
        en.add({before[k].energy, before[k].probability, plus.empty() ? 0.0 : plus[k].probability,
                minus.empty() ? 0.0 : minus[k].probability});
    RunResult res;
    res.tables = {ms, en};
    res.plots = {{1, "energy", {"p_before", "p_plus", "p_minus"}}};
    return res;
}

RunResult run_multihand(const ExperimentConfig& c) {
    const int n3 = std::max(2, c.n3);
    const ProgramGraph g = build_identity_chain(c.s, c.lambda);
    const auto basis = sector(c.s, n3);
    const HermitianOperator h = assemble_hamiltonian(g, *basis);
    Table sl = make_table("slater.csv", {"k1", "k2", "energy", "residual"});
    for (int k1 = 1; k1 <= c.s; ++k1)
        for (int k2 = k1 + 1; k2 <= c.s; ++k2) {
            std::vector<int> modes = {k1, k2};
            for (int extra = 3; extra <= n3; ++extra) modes.push_back(k2 + extra - 2);
            if (modes.back() > c.s) continue;
            const CVec v = slater_state(*basis, modes);
            double e = 0;
            for (int k : modes) e += -c.lambda * std::cos(k * kPi / (c.s + 1));
            sl.add({static_cast<long long>(k1), static_cast<long long>(k2), e, (h.apply(v) - e * v).cwiseAbs().maxCoeff()});
        }
    Table jt = make_table("joint.csv", {"v2", "conditional_mean", "leading"});
    for (int i = 1; i < 50; ++i) {
        const double v2 = i / 50.0;
        jt.add({v2, conditional_mean_joint(v2), 0.75 * v2});
    }
    RunResult res;
    res.tables = {sl, jt};
    res.plots = {{1, "v2", {"conditional_mean", "leading"}}};
    return res;
}

RunResult run_confinement(const ExperimentConfig& c) {
    const int a = std::max(1, c.s / 2 - 1);
    if (a + 2 > c.s - 1) throw ModelError("chain too short for two separated links");
    RegisterSpec reg;
    reg.mu = 1;
    const Primitive A = Primitive::pauli(1, QubitRef::data(1)), B = Primitive::pauli(3, QubitRef::data(1));
    const ProgramGraph sep = build_two_link(a, a + 2, A, B, c.s, reg, c.lambda);
    const ProgramGraph adj = build_two_link(a, a + 1, A, B, c.s, reg, c.lambda);
    const auto basis = sector(c.s, 2);
    CVec r0(2);
    r0 << 1.0, 0.0;
    const MachineState psi0 = MachineState::product_at(basis, reg, r0, {1, 2});
    const Propagator ps(sep, basis), pa(adj, basis);
    const SpectralEvolver es(ps.spectrum(), psi0.amp), ea(pa.spectrum(), psi0.amp);
    auto past = [&](const CVec& amp, int b) {
        MachineState m = psi0;
        m.amp = amp;
        const RVec p = cursor_distribution(m);
        double acc = 0;
        for (std::size_t k = 0; k < basis->size(); ++k)
            if (basis->config(k)[0] > b) acc += p(k);
        return acc;
    };
    Table t = make_table("confinement.csv", {"t", "p_past_separated", "p_past_adjacent"});
    for (double tt : time_grid(or_default(c.t_max, 4.0 * c.s), or_default(c.t_step, 0.1)))
        t.add({tt, past(es.at(tt), a + 2), past(ea.at(tt), a + 1)});
    RunResult res;
    res.tables = {t};
    res.plots = {{0, "t", {"p_past_separated", "p_past_adjacent"}}};
    return res;
}

std::string config_label(const ExcitationBasis& b, std::size_t k) {
    std::string s;
    for (int x : b.config(k)) s += (s.empty() ? "" : ";") + std::to_string(x);
    return s;
}

RunResult run_sampler(const ExperimentConfig& c) {
    const int n3 = c.n3;
    const ProgramGraph g = build_identity_chain(c.s, c.lambda);
    const auto basis = sector(c.s, n3);
    std::vector<int> start(n3);
    for (int i = 0; i < n3; ++i) start[i] = i + 1;
    const MachineState psi0 = MachineState::product_at(basis, g.reg, CVec::Ones(1), start);
    const SamplerSetup setup = sampler_setup(g, psi0);
    check_nearest_neighbor(setup.hop, *basis);
    SamplerOptions opts;
    opts.T = or_default(c.T, double(c.s));
    opts.dt = or_default(c.dt, 0.01);
    const PathSampler sampler(setup.hop, setup.psi, opts);

    const std::vector<int> region = c.region.empty() ? std::vector<int>{9, 11} : c.region;
    auto in_region = [&](std::size_t k) {
        const auto& cfg = basis->config(k);
        return cfg.front() > region[0] && cfg.back() <= region[1];
    };
    Table paths = make_table("paths.csv", {"path_id", "t", "config"});
    Table soj = make_table("sojourn.csv", {"path_id", "sojourn_time"});
    RVec hist = RVec::Zero(static_cast<Eigen::Index>(basis->size()));
    const std::size_t keep_paths = 100;
    const std::size_t stride = std::max<std::size_t>(1, sampler.steps() / 200);
    const std::size_t batch = 512;
    for (std::size_t first = 0; first < static_cast<std::size_t>(c.paths); first += batch) {
        const std::size_t n = std::min<std::size_t>(batch, c.paths - first);
        const auto ps = sampler.sample_many(c.seed, first, n);
        const SojournStats st = sojourn_statistics(ps, in_region);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = ps[i];
            soj.add({static_cast<long long>(p.id), st.sojourn[i]});
            hist(static_cast<Eigen::Index>(p.config.back())) += 1.0;
            if (p.id < keep_paths)
                for (std::size_t j = 0; j < p.t.size(); j += stride)
                    paths.add({static_cast<long long>(p.id), p.t[j], config_label(*basis, p.config[j])});
        }
    }
    hist /= double(c.paths);
    const RVec exact = setup.psi(opts.T).cwiseAbs2();
    RunResult res;
    if (n3 == 1) {
        Table occ = make_table("occupancy.csv", {"x", "empirical", "exact"});
        for (int x = 1; x <= c.s; ++x) occ.add({static_cast<long long>(x), hist(x - 1), exact(x - 1)});
        res.tables = {paths, soj, occ};
        res.plots = {{2, "x", {"empirical", "exact"}}};
    } else {
        Table occ = make_table("occupancy.csv", {"config", "empirical", "exact"});
        for (std::size_t k = 0; k < basis->size(); ++k)
            occ.add({config_label(*basis, k), hist(static_cast<Eigen::Index>(k)), exact(static_cast<Eigen::Index>(k))});
        res.tables = {paths, soj, occ};
    }
    return res;
}

RunResult run_dj(const ExperimentConfig& c) {
    const int s = c.s > 0 ? c.s : 10;
    const auto in = dj_initial_state(c.dj_function, c.dj_bits, s);
    std::vector<double> series;
    const double t_max = or_default(c.t_max, double(s)), step = or_default(c.t_step, 0.1);
    const double score = dj_stationarity_score(in, c.lambda, t_max, step, &series);
    const auto grid = time_grid(t_max, step);
    Table st = make_table("stationarity.csv", {"t", "overlap"});
    for (std::size_t i = 0; i < grid.size(); ++i) st.add({grid[i], series[i]});
    Table sc = make_table("score.csv", {"function", "score"});
    sc.add({c.dj_function, score});
    RunResult res;
    res.tables = {st, sc};
    res.plots = {{0, "t", {"overlap"}}};
    return res;
}

RunResult run_sync(const ExperimentConfig& c) {
    Table t = make_table("sync.csv", {"t", "p_h1", "p_h2"});
    CVec r0 = CVec::Zero(4);
    // sigma1(1) = +1, sigma3(2) = -1
    r0(1) = r0(3) = 1.0 / std::sqrt(2.0);
    std::vector<std::function<double(double)>> curves;
    std::vector<std::unique_ptr<Propagator>> props;
    std::vector<MachineState> starts;
    for (bool sync : {true, false}) {
        const ProgramGraph g = build_sync_switch(sync, c.lambda);
        starts.push_back(start_at_site(g, r0));
        props.push_back(std::make_unique<Propagator>(g, starts.back().basis));
    }
    auto p_exit = [&](std::size_t i, double tt) {
        const MachineState m = props[i]->evolve(starts[i], tt);
        const std::size_t exit = m.basis->size() - 1;
        const Eigen::Index rd = static_cast<Eigen::Index>(m.reg.dim());
        const CVec reg = m.amp.segment(static_cast<Eigen::Index>(exit) * rd, rd);
        return std::norm(r0.dot(reg));
    };
    for (double tt : time_grid(or_default(c.t_max, 10.0), or_default(c.t_step, 0.05))) t.add({tt, p_exit(0, tt), p_exit(1, tt)});
    RunResult res;
    res.tables = {t};
    res.plots = {{0, "t", {"p_h1", "p_h2"}}};
    return res;
}

}  // namespace

std::vector<SectorState> dj_initial_state(const std::string& function, int bits, int s) {
    if (bits < 1 || bits > 16 || bits >= s) throw ModelError("query register needs 1 <= bits < s");
    std::function<int(const std::vector<int>&)> f;
    if (function == "constant") f = [](const std::vector<int>&) { return 1; };
    else if (function == "balanced") f = [](const std::vector<int>& z) { return z[0]; };
    else if (function == "parity") f = [](const std::vector<int>& z) {
            int p = 1;
            for (int v : z) p *= v;
            return p;
        };
    else throw ModelError("unknown function '" + function + "'");
    const std::size_t nz = std::size_t{1} << bits;
    std::map<int, SectorState> sectors;
    for (std::size_t M = 0; M < nz; ++M) {
        double cm = 0;
        for (std::size_t zi = 0; zi < nz; ++zi) {
            std::vector<int> z(bits);
            int prod = 1;
            for (int j = 0; j < bits; ++j) {
                z[j] = (zi >> j) & 1 ? -1 : 1;
                if ((M >> j) & 1) prod *= z[j];
            }
            cm += f(z) * prod;
        }
        cm /= double(nz);
        if (std::abs(cm) < 1e-14) continue;
        std::vector<int> up;
        for (int x = 1; x <= s; ++x)
            if (x > bits || !((M >> (x - 1)) & 1)) up.push_back(x);
        const int k = static_cast<int>(up.size());
        auto& sec = sectors[k];
        if (!sec.basis) {
            sec.basis = sector(s, k);
            sec.amp = CVec::Zero(static_cast<Eigen::Index>(sec.basis->size()));
        }
        sec.amp(static_cast<Eigen::Index>(sec.basis->rank(up))) += cm;
    }
    std::vector<SectorState> out;
    for (auto& [k, sec] : sectors) out.push_back(sec);
    return out;
}

double dj_stationarity_score(const std::vector<SectorState>& in, double lambda, double t_max, double t_step,
                             std::vector<double>* series) {
    if (in.empty()) throw ModelError("empty initial state");
    const int s = in.front().basis->sites();
    const ProgramGraph g = build_identity_chain(s, lambda);
    std::vector<SpectralDecomposition> decs;
    for (const auto& sec : in) decs.push_back(eigh(assemble_hamiltonian(g, *sec.basis)));
    const auto grid = time_grid(t_max, t_step);
    double acc = 0;
    for (double t : grid) {
        cplx ov = 0;
        for (std::size_t i = 0; i < in.size(); ++i) ov += in[i].amp.dot(evolve_spectral(decs[i], in[i].amp, t));
        acc += std::abs(ov);
        if (series) series->push_back(std::abs(ov));
    }
    return acc / grid.size();
}

CVec slater_state(const ExcitationBasis& basis, const std::vector<int>& modes) {
    const int n = basis.excitations(), s = basis.sites();
    if (static_cast<int>(modes.size()) != n) throw ModelError("need one mode per excitation");
    CVec v(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t c = 0; c < basis.size(); ++c) {
        const auto& x = basis.config(c);
        RMat m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = std::sqrt(2.0 / (s + 1)) * std::sin(modes[i] * kPi * x[j] / (s + 1));
        v(static_cast<Eigen::Index>(c)) = m.determinant();
    }
    return v / v.norm();
}

RunResult compute_experiment(const ExperimentConfig& c) {
    experiment_info(c.name);
    if (c.name == "chain") return run_chain(c);
    if (c.name == "telomere") return run_telomere(c, false);
    if (c.name == "pipulse") return run_telomere(c, true);
    if (c.name == "grover-damping") return run_grover_damping(c);
    if (c.name == "toy-bloch") return run_toy_bloch(c);
    if (c.name == "launchpad") return run_launchpad(c);
    if (c.name == "measurement") return run_measurement(c);
    if (c.name == "multihand") return run_multihand(c);
    if (c.name == "confinement") return run_confinement(c);
    if (c.name == "sampler") return run_sampler(c);
    if (c.name == "dj-stationarity") return run_dj(c);
    if (c.name == "sync-switch") return run_sync(c);
    throw ConfigError("experiment '" + c.name + "' is not implemented");
}

std::vector<std::string> run_experiment(ExperimentConfig cfg, const RunOptions& opts) {
    if (opts.out_dir) cfg.out_dir = *opts.out_dir;
    if (opts.svg) cfg.emit_svg = *opts.svg;
    if (opts.seed) cfg.seed = *opts.seed;
    std::vector<std::string> written;
    const fs::path dir(cfg.out_dir);
    try {
        const RunResult res = compute_experiment(cfg);
        fs::create_directories(dir);
        for (const auto& t : res.tables) {
            const std::string p = (dir / t.name).string();
            write_csv(t, p);
            written.push_back(p);
        }
        if (cfg.emit_svg)
            for (const auto& pl : res.plots) {
                const Table& t = res.tables.at(pl.table);
                const std::string p = (dir / (fs::path(t.name).stem().string() + ".svg")).string();
                write_svg(t, pl.x, pl.ys, p);
                written.push_back(p);
            }
        std::ostringstream m;
        m << "tool " << kToolVersion << "\n";
        m << "schema_version " << kSchemaVersion << "\n";
        m << "experiment " << cfg.name << "\n";
        m << "config " << (opts.config_path.empty() ? "-" : opts.config_path) << "\n";
        m << "keys " << cfg.keys_set.size() << "\n";
        for (const auto& k : cfg.keys_set) m << "  " << k << "\n";
        m << "seed " << cfg.seed << "\n";
        for (const auto& t : res.tables) {
            m << "output " << t.name << ":";
            for (const auto& col : t.columns) m << " " << col;
            m << "\n";
        }
        const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char buf[64];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        m << "created " << buf << "\n";
        const std::string mp = (dir / "manifest.txt").string();
        std::ofstream mf(mp);
        if (!mf) throw OutputError("cannot write '" + mp + "'");
        written.push_back(mp);
        mf << m.str();
        if (!mf) throw OutputError("write failed for '" + mp + "'");
    } catch (...) {
        std::error_code ec;
        for (const auto& p : written) fs::remove(p, ec);
        throw;
    }
    return written;
}

}  // namespace csim
