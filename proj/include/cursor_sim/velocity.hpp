#pragma once

#include <functional>

#include "cursor_sim/machine.hpp"

namespace csim {

enum class SpeedFamily { M1, FromSite, General, Launchpad, Flat };

// A univariate time-of-flight speed law on (0, 1).
struct SpeedLaw {
    SpeedFamily family = SpeedFamily::M1;
    int x0 = 1;        // FromSite
    int k = 1;         // Launchpad
    int eps = 1;       // Launchpad
    int n = 1;         // Flat
    CVec psi0;         // General: cursor amplitudes on sites 1..len

    static SpeedLaw m1() { return {}; }
    static SpeedLaw from_site(int x0);
    static SpeedLaw general(const CVec& psi0);
    static SpeedLaw launchpad(int k, int eps);
    static SpeedLaw flat(int n);
};

double density(const SpeedLaw& law, double v);
double cdf(const SpeedLaw& law, double v);

struct Moments {
    double mean;
    double second;
    double variance;
};
Moments moments(const SpeedLaw& law);

// E exp(i a V) for the M1 law, in Bessel and Struve functions; a may be negative.
cplx characteristic_m1(double a);

double cdf_from_site(int x0, double v);
double mean_from_site(int x0);  // closed form 8 / (4 pi - pi / x0^2)

// Joint law of the two ordered speeds for two excitations started at sites 1, 2.
double joint_density(double v1, double v2);
double joint_normalization(double tol = 1e-7);
double conditional_mean_joint(double v2);

struct EmpiricalSpeed {
    double t = 0;
    double mean = 0;        // E(Q) / t
    double variance_q = 0;  // var(Q)
    RVec occupancy;         // P(Q = x), x = 1..s
};

EmpiricalSpeed empirical_speed(const MachineState& psi_t, double t);
EmpiricalSpeed empirical_speed(const ProgramGraph& graph, const MachineState& psi0, double t);

// sup_v |F_emp(v) - F(v)| for the lattice law of Q/t.
double ks_distance(const EmpiricalSpeed& emp, const std::function<double(double)>& F);

enum class LaunchpadKind { Eigen, Flat, Gamma };
// Cursor amplitudes on sites 1..len (len = eps for Eigen, 2n - 1 otherwise).
CVec launchpad_state(LaunchpadKind kind, int param, int eps = 0);
// Same, zero-padded to an s-site chain.
CVec launchpad_state_on_chain(LaunchpadKind kind, int param, int eps, int s);

}  // namespace csim
