#pragma once

#include <vector>

#include "cursor_sim/machine.hpp"

namespace csim {

// Plain program line: edge x -> x+1 carries prims[x-1]. Register is taken from reg.
ProgramGraph build_linear_chain(int s, const std::vector<Primitive>& prims, const RegisterSpec& reg,
                                double lambda = 2.0);
ProgramGraph build_identity_chain(int s, double lambda = 2.0);

// Alternating oracle (odd edges) / estimator (even edges) on mu data qubits plus ancilla.
ProgramGraph build_grover_line(int mu, int s, const std::vector<int>& word, double lambda = 2.0);

// Single-qubit register rotated by exp(-i alpha sigma2 / 2) on every edge.
ProgramGraph build_toy_chain(int s, double alpha, double lambda = 2.0);
// Same register, edges alternate between the 2-D reflections A (odd) and B (even).
ProgramGraph build_toy_alternating(int s, int mu, double lambda = 2.0);
// Toy register state cos(theta/2)|+1> + sin(theta/2)|-1>.
CVec toy_register_state(double theta);
CMat toy_oracle(int mu);     // 1 - 2|w><w|, w = sigma3=+1
CMat toy_estimator(int mu);  // 2|i><i| - 1

int cmu_not_sites(int mu);   // (mu+1)(mu+2)
int cmu_not_length(int mu);  // 2(mu+1) states along every path
// Controls are data qubits 1..mu, the target is the ancilla. Sites base .. base+s_mu-1.
ProgramGraph build_cmu_not(int mu, int base = 1, double lambda = 2.0);

int iterator_sites(int K);       // 4K+3
int iterator_successors(int K);  // 2^(K+3)-5
// Applies B*A 2^K times; reg must carry exactly K counter qubits.
ProgramGraph build_subroutine_iterator(int K, const Primitive& A, const Primitive& B, const RegisterSpec& reg,
                                       double lambda = 2.0);

// Trap on a control qubit (control 1). Metadata: "active", "telomere", and "telomere2" when double.
ProgramGraph build_trap(int s, int delta, bool double_trap, double lambda = 2.0);

enum class SwitchVariant { SpinFlip, Projective, SyncH1, SyncH2 };
// Diamond 1 -> {2,4} -> {3,5} -> 6 (H2: 5 sites, no delay edge). A runs on the sigma3=+1 branch.
ProgramGraph build_switch(SwitchVariant variant, const Primitive& A, const Primitive& B, const RegisterSpec& reg,
                          QubitRef control, double lambda = 2.0);
// The synchronisation demo: control data(1), A = sigma3 on data(2), B = identity.
ProgramGraph build_sync_switch(bool synchronized, double lambda = 2.0);

// Two active links a -> a+1 (A) and b -> b+1 (B); identity elsewhere.
ProgramGraph build_two_link(int a, int b, const Primitive& A, const Primitive& B, int s, const RegisterSpec& reg,
                            double lambda = 2.0);
// One active link x0 -> x0+1 carrying G; identity elsewhere.
ProgramGraph build_single_active_link(int s, int x0, const Primitive& G, const RegisterSpec& reg,
                                      double lambda = 2.0);

}  // namespace csim
