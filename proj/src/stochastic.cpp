#include "cursor_sim/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include "cursor_sim/builders.hpp"

namespace csim {

HopGraph hop_graph(const HermitianOperator& h) {
    HopGraph g;
    g.out.resize(h.dim());
    for (const auto& e : h.entries()) {
        if (e.row == e.col || std::abs(e.value) == 0.0) continue;
        // g = -H; H(col, row) = conj(H(row, col)).
        const cplx grc = -e.value;
        g.out[e.row].push_back({e.col, std::abs(grc), std::arg(grc)});
        g.out[e.col].push_back({e.row, std::abs(grc), -std::arg(grc)});
    }
    return g;
}

HopGraph hop_graph_free_chain(const ExcitationBasis& basis, double lambda) {
    HopGraph g = hop_graph(assemble_hamiltonian(build_identity_chain(basis.sites(), lambda), basis));
    check_nearest_neighbor(g, basis);
    return g;
}

HopGraph hop_graph_reduced(const ReducedHamiltonian& h) {
    HopGraph g;
    g.out.resize(h.size());
    for (std::size_t k = 0; k + 1 < h.size(); ++k) {
        const double v = -h.off(static_cast<Eigen::Index>(k));
        const double ph = v < 0 ? kPi : 0.0;
        g.out[k].push_back({k + 1, std::abs(v), ph});
        g.out[k + 1].push_back({k, std::abs(v), -ph});
    }
    return g;
}

void check_nearest_neighbor(const HopGraph& hop, const ExcitationBasis& basis) {
    if (hop.size() != basis.size()) throw ModelError("hop graph does not match the excitation basis");
    for (std::size_t n = 0; n < hop.size(); ++n)
        for (const Hop& h : hop.out[n]) {
            const auto& a = basis.config(n);
            const auto& b = basis.config(h.to);
            int moved = 0;
            bool ok = true;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] == b[i]) continue;
                ++moved;
                ok = ok && std::abs(a[i] - b[i]) == 1;
            }
            if (moved != 1 || !ok) throw ModelError("configuration graph is not nearest-neighbor");
        }
}

double RateTable::total(std::size_t n) const {
    double s = 0;
    for (double r : rate[n]) s += r;
    return s;
}

std::vector<double> forward_rates_from(const HopGraph& hop, const CVec& psi, std::size_t n, double dt) {
    std::vector<double> out(hop.out[n].size(), 0.0);
    const double rn = std::norm(psi(static_cast<Eigen::Index>(n)));
    if (rn < kDensityFloor) return out;
    const double sn = std::arg(psi(static_cast<Eigen::Index>(n)));
    const double cap = dt > 0 ? 1e3 / dt : std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < out.size(); ++j) {
        const Hop& h = hop.out[n][j];
        const cplx pm = psi(static_cast<Eigen::Index>(h.to));
        const double rm = std::norm(pm);
        if (rm == 0.0) continue;
        const double a = h.magnitude * std::sqrt(rm / rn) * (1.0 + std::sin(std::arg(pm) - sn + h.phase));
        out[j] = std::min(a, cap);
    }
    return out;
}

RateTable forward_rates(const HopGraph& hop, const CVec& psi, double t, double dt) {
    if (static_cast<std::size_t>(psi.size()) != hop.size()) throw ModelError("wavefunction does not match hop graph");
    RateTable r;
    r.t = t;
    r.rate.resize(hop.size());
    for (std::size_t n = 0; n < hop.size(); ++n) r.rate[n] = forward_rates_from(hop, psi, n, dt);
    return r;
}

RMat generator(const HopGraph& hop, const RateTable& rates) {
    const Eigen::Index d = static_cast<Eigen::Index>(hop.size());
    RMat g = RMat::Zero(d, d);
    for (std::size_t n = 0; n < hop.size(); ++n)
        for (std::size_t j = 0; j < hop.out[n].size(); ++j) {
            const double a = rates.rate[n][j];
            g(static_cast<Eigen::Index>(hop.out[n][j].to), static_cast<Eigen::Index>(n)) += a;
            g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) -= a;
        }
    return g;
}

RVec rate_drift(const HopGraph& hop, const RateTable& rates, const CVec& psi) {
    const RVec rho = psi.cwiseAbs2();
    return generator(hop, rates) * rho;
}

RVec schrodinger_drift(const HermitianOperator& h, const CVec& psi) {
    const CVec hp = h.apply(psi);
    return 2.0 * (psi.conjugate().cwiseProduct(hp)).imag();
}

RVec integrate_master(const HopGraph& hop, const WaveSource& psi, const RVec& p0, double T, double dt) {
    if (!(dt > 0) || !(T >= 0)) throw ModelError("master equation needs dt > 0 and T >= 0");
    const std::size_t n = static_cast<std::size_t>(std::llround(T / dt));
    const double h = n ? T / n : 0.0;
    auto f = [&](double t, const RVec& p) -> RVec { return generator(hop, forward_rates(hop, psi(t), t)) * p; };
    RVec p = p0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i * h;
        const RVec k1 = f(t, p);
        const RVec k2 = f(t + 0.5 * h, p + 0.5 * h * k1);
        const RVec k3 = f(t + 0.5 * h, p + 0.5 * h * k2);
        const RVec k4 = f(t + h, p + h * k3);
        p += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return p;
}

PathSampler::PathSampler(HopGraph hop, WaveSource psi, SamplerOptions opts)
    : hop_(std::move(hop)), psi_(std::move(psi)), opts_(opts) {
    if (!(opts_.dt > 0) || !(opts_.T > 0)) throw ModelError("sampler needs T > 0 and dt > 0");
    steps_ = static_cast<std::size_t>(std::llround(opts_.T / opts_.dt));
    if (std::abs(steps_ * opts_.dt - opts_.T) > 1e-9 * opts_.T) throw ModelError("T must be a multiple of dt");
    const CVec p0 = psi_(0.0);
    if (static_cast<std::size_t>(p0.size()) != hop_.size()) throw ModelError("wavefunction does not match hop graph");
    rho0_ = p0.cwiseAbs2();
    mid_.resize(steps_);
    const unsigned nt = worker_count();
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < steps_; i = next++) {
            const double tm = (i + 0.5) * opts_.dt;
            mid_[i] = forward_rates(hop_, psi_(tm), tm, opts_.dt);
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < nt; ++k) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

namespace {

std::size_t pick(const std::vector<double>& w, double total, double u) {
    double acc = 0;
    const double target = u * total;
    for (std::size_t j = 0; j < w.size(); ++j) {
        acc += w[j];
        if (target < acc) return j;
    }
    for (std::size_t j = w.size(); j-- > 0;)
        if (w[j] > 0) return j;
    return 0;
}

}  // namespace

TrajectoryPath PathSampler::sample(std::uint64_t seed, std::uint64_t id) const {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(id), static_cast<std::uint32_t>(id >> 32)};
    std::mt19937_64 rng(sq);
    std::uniform_real_distribution<double> U(0.0, 1.0);

    TrajectoryPath path;
    path.seed = seed;
    path.id = id;
    path.dt = opts_.dt;
    std::size_t n = pick(std::vector<double>(rho0_.data(), rho0_.data() + rho0_.size()), rho0_.sum(), U(rng));
    auto record = [&](double t) {
        path.t.push_back(t);
        path.config.push_back(n);
    };
    if (opts_.record) {
        path.t.reserve(steps_ + 1);
        path.config.reserve(steps_ + 1);
    }
    record(0.0);
    const double pmax = opts_.max_step_probability;
    for (std::size_t i = 0; i < steps_; ++i) {
        const double t0 = i * opts_.dt;
        const auto& r = mid_[i].rate[n];
        const double tot = mid_[i].total(n);
        if (tot * opts_.dt <= pmax) {
            if (U(rng) < tot * opts_.dt) n = hop_.out[n][pick(r, tot, U(rng))].to;
        } else {
            const int k = static_cast<int>(std::ceil(tot * opts_.dt / pmax));
            if (k > opts_.max_substeps)
                throw NumericsError("jump rate * dt = " + std::to_string(tot * opts_.dt) + " at t = " +
                                    std::to_string(t0) + " needs more than " + std::to_string(opts_.max_substeps) +
                                    " sub-steps; use a smaller dt");
            const double h = opts_.dt / k;
            for (int j = 0; j < k; ++j) {
                const auto rs = forward_rates_from(hop_, psi_(t0 + (j + 0.5) * h), n, opts_.dt);
                double ts = 0;
                for (double a : rs) ts += a;
                if (U(rng) < ts * h) n = hop_.out[n][pick(rs, ts, U(rng))].to;
            }
        }
        if (opts_.record || i + 1 == steps_) record((i + 1) * opts_.dt);
    }
    return path;
}

std::vector<TrajectoryPath> PathSampler::sample_many(std::uint64_t seed, std::size_t first, std::size_t n,
                                                     unsigned threads) const {
    std::vector<TrajectoryPath> out(n);
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mutex;
    auto work = [&] {
        try {
            for (std::size_t i = next++; i < n; i = next++) out[i] = sample(seed, first + i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!err) err = std::current_exception();
            next = n;
        }
    };
    const unsigned nt = std::min<std::size_t>(worker_count(threads), std::max<std::size_t>(n, 1));
    std::vector<std::thread> pool;
    for (unsigned k = 1; k < nt; ++k) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
    return out;
}

SamplerSetup sampler_setup(const ProgramGraph& graph, const MachineState& psi0, std::size_t max_levels) {
    if (!(psi0.reg == graph.reg)) throw ModelError("state register does not match graph");
    SamplerSetup st;
    if (graph.reg.dim() == 1) {
        st.hamiltonian = assemble_hamiltonian(graph, *psi0.basis);
        st.hop = hop_graph(st.hamiltonian);
        st.spectrum = cached_spectrum(graph, *psi0.basis);
        auto ev = std::make_shared<SpectralEvolver>(*st.spectrum, psi0.amp);
        auto keep = st.spectrum;
        st.psi = [ev, keep](double t) { return ev->at(t); };
        return st;
    }
    PeresBasis pb;
    try {
        pb = build_peres_basis(graph, psi0, max_levels);
    } catch (const NonLeveledGraph& e) {
        throw ModelError(std::string("sampler refuses: the cursor marginal is not Peres form (") + e.what() + ")");
    }
    const ReducedHamiltonian rh = reduced_hamiltonian(pb);
    st.hamiltonian = HermitianOperator::from_dense(rh.dense().cast<cplx>());
    st.hop = hop_graph_reduced(rh);
    st.spectrum = std::make_shared<const SpectralDecomposition>(eigh_tridiagonal(rh.diag, rh.off));
    CVec e1 = CVec::Zero(static_cast<Eigen::Index>(rh.size()));
    e1(0) = 1.0;
    auto ev = std::make_shared<SpectralEvolver>(*st.spectrum, e1);
    auto keep = st.spectrum;
    st.psi = [ev, keep](double t) { return ev->at(t); };
    return st;
}

double SojournStats::fraction_zero() const {
    if (sojourn.empty()) return 0.0;
    return double(std::count(sojourn.begin(), sojourn.end(), 0.0)) / sojourn.size();
}

double SojournStats::cdf(double x) const {
    if (sojourn.empty()) return 0.0;
    return double(std::count_if(sojourn.begin(), sojourn.end(), [&](double s) { return s <= x; })) / sojourn.size();
}

SojournStats sojourn_statistics(const std::vector<TrajectoryPath>& paths, const std::function<bool(std::size_t)>& region) {
    SojournStats st;
    st.sojourn.reserve(paths.size());
    for (const auto& p : paths) {
        if (p.config.size() < 2) throw ModelError("sojourn statistics need recorded paths");
        std::size_t hits = 0;
        for (std::size_t i = 0; i + 1 < p.config.size(); ++i)
            if (region(p.config[i])) ++hits;
        st.sojourn.push_back(hits * p.dt);
    }
    return st;
}

unsigned worker_count(unsigned requested) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CURSOR_SIM_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap > 0) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

}  // namespace csim
