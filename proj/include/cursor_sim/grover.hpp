#pragma once

#include <utility>

#include "cursor_sim/machine.hpp"

namespace csim {

struct GroverParams {
    int mu = 1;
    double chi = 0;
    double theta = 0;  // pi - 2 chi
    double alpha = 0;  // -4 chi
    int n_opt = 0;
    std::vector<int> target;  // +1/-1 word, default all +1

    int sites() const { return (1 << mu) + 1; }
};

GroverParams grover_params(int mu, std::vector<int> target = {});

// (alpha_n, beta_n): register amplitude on the target and on each other word after n BA steps.
std::pair<double, double> register_amplitudes(int n, int mu);
double machine_overlap(int n, int mu);

struct RotationCheck {
    double ba = 0;       // max |BA - exp(-i alpha sigma2 / 2)|
    double a_square = 0; // max |A^2 - 1|
    double b_square = 0;
};
RotationCheck ba_rotation_check(int mu);

// Register {mu data qubits, ancilla}: sigma1 = +1 on every data qubit, sigma1(nu) = -1.
CVec grover_initial_register(int mu);
// (BA)^n applied to the initial register, from the closed form.
CVec grover_register_state(int n, const GroverParams& p);
// max |A^2 - 1| on the full register, and the deviation of A from 1 - 2|a><a| on sigma1(nu) = -1.
std::pair<double, double> oracle_checks(const GroverParams& p);

// P(data = target | Q = x) for x = 1..s; NaN where P(Q = x) < floor.
RVec conditional_target_probability(const MachineState& psi, const std::vector<int>& target, double floor = 1e-12);

}  // namespace csim
