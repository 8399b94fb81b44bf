#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cursor_sim/numerics.hpp"

namespace csim {

struct ModelError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Role { Data, Ancilla, Counter, Control };

// Index is 1-based for data, counter and control qubits; ignored for the ancilla.
struct QubitRef {
    Role role = Role::Data;
    int index = 1;

    static QubitRef data(int i) { return {Role::Data, i}; }
    static QubitRef ancilla() { return {Role::Ancilla, 0}; }
    static QubitRef counter(int i) { return {Role::Counter, i}; }
    static QubitRef control(int i) { return {Role::Control, i}; }
    bool operator==(const QubitRef&) const = default;
};

// Qubit order: data 1..mu (qubit 1 most significant), ancilla, counters, controls.
// Within each qubit the sigma3 = +1 state is bit value 0.
struct RegisterSpec {
    int mu = 0;
    bool ancilla = false;
    int counters = 0;
    int controls = 0;

    int qubits() const { return mu + (ancilla ? 1 : 0) + counters + controls; }
    std::size_t dim() const { return std::size_t{1} << qubits(); }
    int position(const QubitRef& q) const;
    bool has(const QubitRef& q) const;

    // Spins (+1/-1) listed in qubit order <-> basis index.
    std::size_t index_of(const std::vector<int>& spins) const;
    std::vector<int> spins_of(std::size_t index) const;
    bool operator==(const RegisterSpec&) const = default;
};

enum class PrimitiveKind {
    Identity,
    Pauli1,
    Pauli2,
    Pauli3,
    RotationY,
    Oracle,
    Estimator,
    CNotCore,
    Raise,
    Lower,
    Negate,
    ProjectPlus,
    ProjectMinus,
    Custom
};

struct Primitive {
    PrimitiveKind kind = PrimitiveKind::Identity;
    QubitRef target{};
    double angle = 0.0;        // RotationY
    std::vector<int> word;     // Oracle, spins of the marked word
    CMat custom;               // Custom

    static Primitive identity() { return {}; }
    static Primitive pauli(int axis, QubitRef q);
    static Primitive rotation_y(double angle, QubitRef q);
    static Primitive oracle(std::vector<int> word);
    static Primitive estimator();
    static Primitive cnot_core();
    static Primitive raise(QubitRef q);
    static Primitive lower(QubitRef q);
    static Primitive negate(QubitRef q);
    static Primitive project_plus(QubitRef q);
    static Primitive project_minus(QubitRef q);
    static Primitive from_matrix(CMat m);

    bool unitary() const;
    // Full register-space matrix.
    CMat matrix(const RegisterSpec& reg) const;
    std::string label() const;
};

// Single-qubit matrices in the (sigma3=+1, sigma3=-1) basis.
CMat sigma(int axis);
CMat sigma_plus();   // |+1><-1|
CMat sigma_minus();  // |-1><+1|

// Embeds a 2x2 operator acting on qubit q into the register space.
CMat embed(const RegisterSpec& reg, const QubitRef& q, const CMat& op);

}  // namespace csim
