#pragma once

#include <Eigen/SparseCore>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cursor_sim/numerics.hpp"
#include "cursor_sim/register.hpp"

namespace csim {

using SparseC = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;

// Lexicographically ordered k-subsets of {1..s}, ranked by combinadics.
class ExcitationBasis {
public:
    ExcitationBasis(int s, int k);

    int sites() const { return s_; }
    int excitations() const { return k_; }
    std::size_t size() const { return configs_.size(); }
    const std::vector<int>& config(std::size_t index) const { return configs_.at(index); }
    const std::vector<std::vector<int>>& configs() const { return configs_; }

    std::size_t rank(const std::vector<int>& subset) const;
    std::vector<int> unrank(std::size_t index) const;

private:
    std::size_t binom(int n, int r) const;
    int s_, k_;
    std::vector<std::vector<std::size_t>> binom_;
    std::vector<std::vector<int>> configs_;
};

struct Edge {
    int from;
    int to;
    Primitive op;
};

struct ProgramGraph {
    int sites = 0;
    double lambda = 2.0;
    RegisterSpec reg{};
    std::vector<Edge> edges;
    std::map<std::string, std::vector<int>> metadata;

    void add_edge(int from, int to, Primitive op);
    void validate() const;
};

// Amplitudes indexed by cursor configuration (major) and register basis state (minor).
struct MachineState {
    std::shared_ptr<const ExcitationBasis> basis;
    RegisterSpec reg{};
    CVec amp;

    std::size_t index(std::size_t reg_index, std::size_t config_index) const {
        return config_index * reg.dim() + reg_index;
    }
    std::size_t dim() const { return basis->size() * reg.dim(); }

    static MachineState zero(std::shared_ptr<const ExcitationBasis> basis, const RegisterSpec& reg);
    // |register> (x) |cursor>, cursor given as amplitudes over configs.
    static MachineState product(std::shared_ptr<const ExcitationBasis> basis, const RegisterSpec& reg,
                                const CVec& reg_state, const CVec& cursor_state);
    static MachineState product_at(std::shared_ptr<const ExcitationBasis> basis, const RegisterSpec& reg,
                                   const CVec& reg_state, const std::vector<int>& config);
    double norm() const { return amp.norm(); }
};

// Register basis vector from a spin list (qubit order), e.g. {+1,-1}.
CVec register_basis_state(const RegisterSpec& reg, const std::vector<int>& spins);

// Forward part F = sum over edges of O (x) |to><from| (no coupling factor) in the n3 sector.
SparseC forward_operator(const ProgramGraph& graph, const ExcitationBasis& basis);

// H = -lambda/2 (F + F^dagger).
HermitianOperator assemble_hamiltonian(const ProgramGraph& graph, int n3);
HermitianOperator assemble_hamiltonian(const ProgramGraph& graph, const ExcitationBasis& basis);

// Diagonal operator counting cursor excitations (a multiple of the identity in one sector).
CVec number_operator_diagonal(const ExcitationBasis& basis, const RegisterSpec& reg);

// Text form: header line plus one "from to primitive" line per edge.
std::string graph_to_text(const ProgramGraph& graph);
ProgramGraph graph_from_text(const std::string& text);
Primitive parse_primitive(const std::string& token);

}  // namespace csim
