#include "kusuoka/markov.hpp"

#include <algorithm>

namespace kusuoka {

double TransitionMatrix::max_row_defect() const {
    return (q.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

double TransitionMatrix::max_column_defect() const {
    return (q.colwise().sum().array() - 1.0).abs().maxCoeff();
}

TransitionMatrix transition_matrix(const Pifs &pifs) {
    const auto &view = pifs.povm().kind().rank_one;
    if (!view) throw Error(ErrorKind::WrongPovmKind, "transition matrix needs a rank-one POVM");
    const auto k = static_cast<Eigen::Index>(view->vectors.size());
    const ComplexMatrix &u = pifs.unitary().matrix();

    TransitionMatrix out;
    out.q.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const ComplexVector moved = u * view->vectors[static_cast<std::size_t>(i)];
        for (Eigen::Index j = 0; j < k; ++j) {
            const Complex overlap = view->vectors[static_cast<std::size_t>(j)].dot(moved);
            out.q(i, j) = std::clamp(view->scale * std::norm(overlap), 0.0, 1.0);
        }
    }
    const double tol = pifs.tolerances().tol_sum;
    if (out.max_row_defect() > tol || out.max_column_defect() > tol) {
        throw Error(ErrorKind::Inconsistent, "transition matrix is not bistochastic");
    }
    return out;
}

double markov_cylinder_prob(const TransitionMatrix &q, const OutcomeString &s) {
    if (s.empty()) throw Error(ErrorKind::EmptyString, "Markov cylinder of the empty string");
    const auto k = q.size();
    for (int sym : s.symbols()) {
        if (sym < 0 || static_cast<std::size_t>(sym) >= k) {
            throw Error(ErrorKind::InvalidArgument, "symbol out of range in " + s.to_string());
        }
    }
    double p = 1.0 / static_cast<double>(k);
    for (std::size_t r = 0; r + 1 < s.size(); ++r) p *= q.q(s[r], s[r + 1]);
    return p;
}

IrreducibilityResult is_irreducible(const TransitionMatrix &q, double threshold) {
    const auto k = static_cast<int>(q.size());
    // reachability sets by breadth-first search from every state; k is tiny
    std::vector<std::vector<char>> reach(static_cast<std::size_t>(k), std::vector<char>(static_cast<std::size_t>(k), 0));
    for (int s = 0; s < k; ++s) {
        auto &seen = reach[static_cast<std::size_t>(s)];
        std::vector<int> frontier{s};
        seen[static_cast<std::size_t>(s)] = 1;
        while (!frontier.empty()) {
            const int i = frontier.back();
            frontier.pop_back();
            for (int j = 0; j < k; ++j) {
                if (!seen[static_cast<std::size_t>(j)] && q.q(i, j) > threshold) {
                    seen[static_cast<std::size_t>(j)] = 1;
                    frontier.push_back(j);
                }
            }
        }
    }

    IrreducibilityResult out;
    out.irreducible = true;
    // The reachable set of any state is closed. A reducible chain has a state
    // whose reachable set is proper; report the smallest such set.
    for (int s = 0; s < k; ++s) {
        const auto &seen = reach[static_cast<std::size_t>(s)];
        const auto count = std::count(seen.begin(), seen.end(), 1);
        if (count < k) {
            std::vector<int> set;
            for (int j = 0; j < k; ++j) {
                if (seen[static_cast<std::size_t>(j)]) set.push_back(j);
            }
            if (out.irreducible || set.size() < out.closed_set.size()) out.closed_set = std::move(set);
            out.irreducible = false;
        }
    }
    return out;
}

}  // namespace kusuoka
