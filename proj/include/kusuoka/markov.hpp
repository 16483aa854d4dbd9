#pragma once

#include <vector>

#include "kusuoka/pifs.hpp"

namespace kusuoka {

/// Q(i, j) = p_j(rho_i): probability of outcome j right after outcome i for a
/// rank-one POVM.
struct TransitionMatrix {
    RealMatrix q;

    std::size_t size() const { return static_cast<std::size_t>(q.rows()); }
    double max_row_defect() const;
    double max_column_defect() const;
};

/// Q(i, j) = (d/k) |<phi_j, U phi_i>|^2. WrongPovmKind unless the POVM has a
/// rank-one view; Inconsistent if Q is not bistochastic within tol_sum.
TransitionMatrix transition_matrix(const Pifs &pifs);

/// (1/k) prod Q(i_r, i_{r+1}); EmptyString for the empty string.
double markov_cylinder_prob(const TransitionMatrix &q, const OutcomeString &s);

struct IrreducibilityResult {
    bool irreducible = false;
    /// Proper non-empty closed set of states (no edge leaves it); empty when
    /// irreducible. 0-based.
    std::vector<int> closed_set;
};

/// Strong connectivity of the graph with an edge i -> j whenever
/// Q(i, j) > threshold.
IrreducibilityResult is_irreducible(const TransitionMatrix &q, double threshold);

}  // namespace kusuoka
