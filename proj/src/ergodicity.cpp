#include "kusuoka/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace kusuoka {

namespace {

const TwoProjView &require_two_proj(const Povm &povm) {
    const auto &view = povm.kind().two_proj;
    if (!view) throw Error(ErrorKind::WrongPovmKind, "needs a PVM of two projections with ranks d-1 and 1");
    return *view;
}

bool subspace_invariant_under(const ComplexMatrix &a, const Subspace &w, const Tolerances &tol) {
    return contains_subspace(w, image(a, w, tol.tol_rank), tol.tol_subspace);
}

// Calls `visit` on each k-subset of {0..n-1} in lexicographic order until it
// returns true.
template <typename Visit>
bool for_each_combination(int n, int size, Visit visit) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (visit(idx)) return true;
        int pos = size - 1;
        while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - size + pos) --pos;
        if (pos < 0) return false;
        ++idx[static_cast<std::size_t>(pos)];
        for (int j = pos + 1; j < size; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

double cross_block_mass(const TransitionMatrix &q, const std::vector<int> &subset) {
    std::vector<char> inside(q.size(), 0);
    for (int i : subset) inside[static_cast<std::size_t>(i)] = 1;
    double mass = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) {
        for (std::size_t j = 0; j < q.size(); ++j) {
            if (inside[i] != inside[j]) mass += q.q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return mass;
}

}  // namespace

// ---------------------------------------------------------------------------
// Burnside closure

AlgebraIrreducibility algebra_irreducible(const std::vector<ComplexMatrix> &family, const Tolerances &tol) {
    if (family.empty()) throw Error(ErrorKind::InvalidArgument, "empty operator family");
    const Eigen::Index d = family.front().rows();
    const Eigen::Index full = d * d;

    // Scaling a generator does not change the algebra; unit HS norm keeps the
    // residual threshold meaningful.
    std::vector<ComplexMatrix> generators;
    for (const auto &g : family) {
        if (g.rows() != d || g.cols() != d) throw Error(ErrorKind::DimensionMismatch, "family members differ in size");
        const double n = g.norm();
        if (n > 0) generators.push_back(g / n);
    }

    ComplexMatrix basis(full, full);  // columns are vectorized, HS-orthonormal matrices
    Eigen::Index size = 0;
    auto try_add = [&](const ComplexMatrix &m) {
        ComplexVector v = Eigen::Map<const ComplexVector>(m.data(), full);
        for (int pass = 0; pass < 2 && size > 0; ++pass) {
            v -= basis.leftCols(size) * (basis.leftCols(size).adjoint() * v);
        }
        const double n = v.norm();
        if (n <= tol.tol_rank) return false;
        basis.col(size++) = v / n;
        return true;
    };

    try_add(ComplexMatrix::Identity(d, d));
    for (Eigen::Index next = 0; next < size && size < full; ++next) {
        const ComplexMatrix word = Eigen::Map<const ComplexMatrix>(basis.col(next).data(), d, d);
        for (const auto &g : generators) {
            try_add(g * word);
            if (size == full) break;
        }
    }
    return {size == full, size};
}

bool adjoint_family_equiv_check(const std::vector<ComplexMatrix> &family, const Tolerances &tol) {
    std::vector<ComplexMatrix> adjoints;
    for (const auto &a : family) adjoints.push_back(a.adjoint());
    return algebra_irreducible(family, tol).irreducible == algebra_irreducible(adjoints, tol).irreducible;
}

// ---------------------------------------------------------------------------
// Scaled projections and rank-one POVMs

bool scaled_projection_criterion(const Unitary &u, const Povm &povm, const Subspace &w, const Tolerances &tol) {
    const auto &kind = povm.kind();
    if (!kind.is_pvm && !kind.rank_one && !kind.two_proj) {
        throw Error(ErrorKind::WrongPovmKind, "POVM elements are not scaled projections");
    }
    if (w.ambient_dim() != u.dim()) throw Error(ErrorKind::DimensionMismatch, "subspace and unitary differ in dimension");
    if (w.is_trivial() || w.is_full()) throw Error(ErrorKind::InvalidArgument, "subspace must be non-trivial and proper");

    const Subspace moved = image(u.matrix(), w, tol.tol_rank);
    bool separate = moved.dim() == w.dim() && contains_subspace(w, moved, tol.tol_subspace);
    for (const auto &e : povm.elements()) {
        separate = separate && subspace_invariant_under(e, w, tol);
    }

    bool composed = true;
    for (const auto &e : povm.elements()) {
        composed = composed && subspace_invariant_under(psd_sqrt(e, tol) * u.matrix(), w, tol);
    }
    if (separate != composed) {
        throw Error(ErrorKind::Inconsistent, "invariance under U and Pi_i disagrees with invariance under sqrt(Pi_i) U");
    }
    return separate;
}

std::optional<Rank1Witness> rank1_subset_search(const Unitary &u, const Povm &povm, const Tolerances &tol) {
    const auto &view = povm.kind().rank_one;
    if (!view) throw Error(ErrorKind::WrongPovmKind, "subset search needs a rank-one POVM");
    const int k = static_cast<int>(view->vectors.size());
    if (static_cast<std::size_t>(k) > kMaxSubsetSearchOutcomes) {
        throw Error(ErrorKind::TooManyOutcomes, std::to_string(k) + " outcomes exceed the subset-search limit of " +
                                                    std::to_string(kMaxSubsetSearchOutcomes));
    }
    const Eigen::Index d = u.dim();

    // U^m phi for m = 0..d-1 spans the smallest U-invariant subspace containing
    // phi: by Cayley-Hamilton U^d is a combination of lower powers.
    std::vector<ComplexMatrix> orbits;
    for (const auto &phi : view->vectors) {
        ComplexMatrix orbit(d, d);
        orbit.col(0) = phi;
        for (Eigen::Index m = 1; m < d; ++m) orbit.col(m) = u.matrix() * orbit.col(m - 1);
        orbits.push_back(std::move(orbit));
    }

    std::optional<Rank1Witness> found;
    for (int size = 1; size < k && !found; ++size) {
        for_each_combination(k, size, [&](const std::vector<int> &subset) {
            ComplexMatrix generators(d, d * static_cast<Eigen::Index>(subset.size()));
            for (std::size_t s = 0; s < subset.size(); ++s) {
                generators.middleCols(d * static_cast<Eigen::Index>(s), d) = orbits[static_cast<std::size_t>(subset[s])];
            }
            Subspace w = orthonormalize(generators, tol.tol_rank);
            if (w.dim() >= d) return false;
            std::vector<char> inside(static_cast<std::size_t>(k), 0);
            for (int i : subset) inside[static_cast<std::size_t>(i)] = 1;
            for (int j = 0; j < k; ++j) {
                if (inside[static_cast<std::size_t>(j)]) continue;
                const ComplexVector &phi = view->vectors[static_cast<std::size_t>(j)];
                if ((w.basis().adjoint() * phi).norm() > tol.tol_subspace) return false;
            }
            found = Rank1Witness{subset, std::move(w)};
            return true;
        });
    }
    return found;
}

// ---------------------------------------------------------------------------
// Two-projection PVMs

ThetaGeometry theta_geometry(const Unitary &u, const Povm &povm, const Tolerances &tol) {
    const auto &view = require_two_proj(povm);
    const auto eig = unitary_eig(u.matrix(), tol);
    const Eigen::Index d = u.dim();

    ThetaGeometry out;
    for (std::size_t c = 0; c < eig.clusters.size(); ++c) {
        const Subspace e = eig.eigenspace(c);
        ThetaIntersection item;
        item.eigenvalue = eig.clusters[c].representative;
        item.eigenspace_dim = e.dim();

        // Theta ∩ E = { Q_E c : <Q_E* z, c> = 0 }
        const ComplexVector a = e.basis().adjoint() * view.z;
        item.z_overlap = a.norm();
        if (item.z_overlap <= tol.tol_subspace) {
            item.intersection = e;
        } else {
            const Subspace coefficients = orth_complement(Subspace(e.dim(), a / item.z_overlap));
            item.intersection = coefficients.is_trivial() ? Subspace::trivial(d)
                                                          : Subspace(d, e.basis() * coefficients.basis());
        }
        item.intersection_dim = item.intersection.dim();
        out.spectral_value += item.intersection_dim;
        out.clusters.push_back(std::move(item));
    }
    return out;
}

std::optional<ThetaEigenvector> pvm2_eigenvector_in_theta(const Unitary &u, const Povm &povm, const Tolerances &tol) {
    const auto geometry = theta_geometry(u, povm, tol);
    for (const auto &c : geometry.clusters) {
        if (c.intersection_dim == 0) continue;
        ThetaEigenvector out;
        out.v = c.intersection.basis().col(0);
        out.eigenvalue = out.v.dot(u.matrix() * out.v);
        return out;
    }
    return std::nullopt;
}

std::size_t default_lemma_m_max(const Unitary &u, const Povm &povm, double target, const Tolerances &) {
    constexpr std::size_t kCap = kMaxLemmaTerms;
    const auto &view = require_two_proj(povm);
    const ComplexMatrix pu = povm.element(view.large) * u.matrix();
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(pu, false);
    if (solver.info() != Eigen::Success) return kCap;
    double rate = 0.0;
    for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j) {
        const double m = std::abs(solver.eigenvalues()[j]);
        if (m < 1.0 - 1e-10) rate = std::max(rate, m);
    }
    if (rate <= 0.0) return 1;
    const double steps = std::ceil(std::log(target) / std::log(rate));
    return static_cast<std::size_t>(std::clamp(steps, 1.0, static_cast<double>(kCap)));
}

TraceLimit lemma_trace_limit(const Unitary &u, const Povm &povm, std::size_t m_max, const Tolerances &tol) {
    const auto &view = require_two_proj(povm);
    const Eigen::Index d = u.dim();
    TraceLimit out;
    out.m_max = m_max == 0 ? default_lemma_m_max(u, povm, 1e-9, tol) : m_max;

    const ComplexMatrix pu = povm.element(view.large) * u.matrix();
    {
        Eigen::ComplexEigenSolver<ComplexMatrix> solver(pu, false);
        for (Eigen::Index j = 0; j < solver.eigenvalues().size(); ++j) {
            const double m = std::abs(solver.eigenvalues()[j]);
            if (m < 1.0 - 1e-10) out.contraction_rate = std::max(out.contraction_rate, m);
        }
    }

    ComplexMatrix power = ComplexMatrix::Identity(d, d);
    out.sequence.reserve(out.m_max);
    for (std::size_t m = 1; m <= out.m_max; ++m) {
        power = pu * power;
        // tr(X X*) = ||X||_HS^2
        out.sequence.push_back(power.squaredNorm());
    }
    out.spectral_value = static_cast<double>(theta_geometry(u, povm, tol).spectral_value);
    out.convergence_gap = out.sequence.back() - out.spectral_value;
    out.converged = std::abs(out.convergence_gap) <= 1e-6;
    return out;
}

double nonergodic_tail_mass(const Unitary &u, const Povm &povm, const Tolerances &tol) {
    return static_cast<double>(theta_geometry(u, povm, tol).spectral_value) / static_cast<double>(u.dim());
}

// ---------------------------------------------------------------------------
// Verdict

std::string_view to_string(ErgodicityStatus status) {
    switch (status) {
        case ErgodicityStatus::Ergodic: return "Ergodic";
        case ErgodicityStatus::NonErgodic: return "NonErgodic";
        case ErgodicityStatus::UnknownSufficientOnly: return "UnknownSufficientOnly";
    }
    return "UnknownSufficientOnly";
}

std::string_view to_string(ErgodicityCriterion criterion) {
    switch (criterion) {
        case ErgodicityCriterion::Rank1Equivalence: return "Rank1Equivalence";
        case ErgodicityCriterion::TwoProjEquivalence: return "TwoProjEquivalence";
        case ErgodicityCriterion::KusuokaSufficient: return "KusuokaSufficient";
    }
    return "KusuokaSufficient";
}

bool ErgodicityVerdict::all_checks_passed() const {
    return std::all_of(cross_checks.begin(), cross_checks.end(), [](const CrossCheck &c) { return c.passed; });
}

namespace {

struct Rank1Outcome {
    bool ergodic = false;
    ErgodicityWitness witness;
};

Rank1Outcome rank1_route(const Pifs &pifs, ErgodicityVerdict &verdict) {
    const auto &tol = pifs.tolerances();
    const TransitionMatrix q = transition_matrix(pifs);
    const auto irreducibility = is_irreducible(q, pifs.zero_prob_threshold());

    Rank1Outcome out;
    out.ergodic = irreducibility.irreducible;
    try {
        const auto search = rank1_subset_search(pifs.unitary(), pifs.povm(), tol);
        verdict.cross_checks.push_back({"transition_irreducible_iff_no_invariant_subset", out.ergodic == !search});
        if (search) {
            verdict.cross_checks.push_back(
                {"subset_witness_zero_cross_mass", cross_block_mass(q, search->subset) <= tol.tol_sum});
            out.witness = IndexSubsetWitness{search->subset, search->subspace};
        }
    } catch (const Error &err) {
        if (err.kind() != ErrorKind::TooManyOutcomes) throw;
        verdict.diagnostics.emplace_back(err.what());
    }
    if (!out.ergodic && std::holds_alternative<std::monostate>(out.witness)) {
        out.witness = IndexSubsetWitness{irreducibility.closed_set, Subspace::trivial(pifs.dim())};
    }
    return out;
}

}  // namespace

ErgodicityVerdict ergodicity_verdict(const Pifs &pifs) {
    const auto &tol = pifs.tolerances();
    const auto &kind = pifs.povm().kind();
    ErgodicityVerdict verdict;
    verdict.algebra = algebra_irreducible(pifs.kraus(), tol);

    const bool irreducible = verdict.algebra.irreducible;
    auto record_burnside = [&](std::string name, bool ergodic) {
        verdict.cross_checks.push_back({std::move(name), ergodic == irreducible});
    };

    if (kind.tag == PovmTag::TwoProjRankOne) {
        verdict.criterion = ErgodicityCriterion::TwoProjEquivalence;
        const auto found = pvm2_eigenvector_in_theta(pifs.unitary(), pifs.povm(), tol);
        verdict.status = found ? ErgodicityStatus::NonErgodic : ErgodicityStatus::Ergodic;
        if (found) verdict.witness = EigenvectorWitness{found->v, found->eigenvalue};
        record_burnside("theta_eigenvector_iff_reducible", !found);
        if (kind.rank_one) {
            const auto rank1 = rank1_route(pifs, verdict);
            verdict.cross_checks.push_back({"rank1_route_agrees", rank1.ergodic == !found});
        }
    } else if (kind.tag == PovmTag::RankOnePovm) {
        verdict.criterion = ErgodicityCriterion::Rank1Equivalence;
        const auto rank1 = rank1_route(pifs, verdict);
        verdict.status = rank1.ergodic ? ErgodicityStatus::Ergodic : ErgodicityStatus::NonErgodic;
        verdict.witness = rank1.witness;
        record_burnside("transition_irreducible_iff_family_irreducible", rank1.ergodic);
    } else {
        verdict.criterion = ErgodicityCriterion::KusuokaSufficient;
        if (irreducible) {
            verdict.status = ErgodicityStatus::Ergodic;
        } else {
            verdict.status = ErgodicityStatus::UnknownSufficientOnly;
            verdict.diagnostics.push_back("generated algebra has dimension " + std::to_string(verdict.algebra.dimension) +
                                          " < " + std::to_string(pifs.dim() * pifs.dim()) +
                                          "; irreducibility is only known to be sufficient for this POVM class");
        }
    }

    if (verdict.status == ErgodicityStatus::NonErgodic) {
        verdict.cross_checks.push_back({"witness_verifies", verify_witness(pifs, verdict.witness)});
    }
    verdict.cross_checks.push_back({"adjoint_family_equivalent", adjoint_family_equiv_check(pifs.kraus(), tol)});
    return verdict;
}

bool verify_witness(const Pifs &pifs, const ErgodicityWitness &witness, double tol) {
    const auto &tols = pifs.tolerances();
    return std::visit(
        [&](const auto &w) -> bool {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return false;
            } else if constexpr (std::is_same_v<T, SubspaceWitness>) {
                return scaled_projection_criterion(pifs.unitary(), pifs.povm(), w.subspace, tols);
            } else if constexpr (std::is_same_v<T, IndexSubsetWitness>) {
                if (w.subset.empty() || w.subset.size() >= pifs.outcomes()) return false;
                if (cross_block_mass(transition_matrix(pifs), w.subset) > tol) return false;
                if (w.subspace.is_trivial()) return true;
                return scaled_projection_criterion(pifs.unitary(), pifs.povm(), w.subspace, tols);
            } else {
                const auto &view = pifs.povm().kind().two_proj;
                if (!view) return false;
                const ComplexMatrix &u = pifs.unitary().matrix();
                return std::abs(w.v.norm() - 1.0) <= tol && (u * w.v - w.eigenvalue * w.v).norm() <= tol &&
                       std::abs(view->z.dot(w.v)) <= tol;
            }
        },
        witness);
}

}  // namespace kusuoka
