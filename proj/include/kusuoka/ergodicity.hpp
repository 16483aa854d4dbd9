#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kusuoka/markov.hpp"

namespace kusuoka {

// ---------------------------------------------------------------------------
// Irreducibility of operator families

struct AlgebraIrreducibility {
    bool irreducible = false;
    Eigen::Index dimension = 0;  // dimension of the generated unital algebra
};

/// Burnside test: a family of d x d matrices has no common non-trivial
/// invariant subspace iff the unital algebra it generates is all of M_d(C),
/// i.e. has dimension d^2. The algebra is the span of all words, built by
/// closing span{I} under left multiplication by the generators.
AlgebraIrreducibility algebra_irreducible(const std::vector<ComplexMatrix> &family, const Tolerances &tol = {});

/// Irreducibility of the family and of its adjoints must coincide; returns
/// whether they do.
bool adjoint_family_equiv_check(const std::vector<ComplexMatrix> &family, const Tolerances &tol = {});

// ---------------------------------------------------------------------------
// Scaled-projection and rank-one criteria

/// For a POVM of scaled projections and a non-trivial proper subspace W:
/// U(W) = W and Pi_i(W) within W for all i. Also evaluates the equivalent
/// condition sqrt(Pi_i) U (W) within W and throws Inconsistent if the two
/// disagree.
bool scaled_projection_criterion(const Unitary &u, const Povm &povm, const Subspace &w,
                                 const Tolerances &tol = {});

struct Rank1Witness {
    std::vector<int> subset;  // 0-based outcome indices whose vectors lie in W
    Subspace subspace;        // U-invariant, contains phi_i for i in subset, orthogonal to the rest
};

/// Largest outcome count accepted by the exhaustive subset search.
inline constexpr std::size_t kMaxSubsetSearchOutcomes = 20;

/// Searches the non-empty proper subsets S of outcomes (by size, then
/// lexicographically) for a U-invariant W generated by {phi_i : i in S} with
/// every other phi_j orthogonal to W. TooManyOutcomes above
/// kMaxSubsetSearchOutcomes.
std::optional<Rank1Witness> rank1_subset_search(const Unitary &u, const Povm &povm, const Tolerances &tol = {});

// ---------------------------------------------------------------------------
// Two-projection PVMs

/// dim(Theta intersected with the eigenspace) for one eigenvalue cluster of U.
struct ThetaIntersection {
    Complex eigenvalue;
    Eigen::Index eigenspace_dim = 0;
    Eigen::Index intersection_dim = 0;
    double z_overlap = 0.0;  // ||P_E z||
    Subspace intersection;
};

struct ThetaGeometry {
    std::vector<ThetaIntersection> clusters;
    Eigen::Index spectral_value = 0;  // sum of intersection dimensions
};

/// Per-eigenspace intersections with Theta = span{z}^perp.
ThetaGeometry theta_geometry(const Unitary &u, const Povm &povm, const Tolerances &tol = {});

struct ThetaEigenvector {
    ComplexVector v;
    Complex eigenvalue;
};

/// An eigenvector of U lying in Theta, if any (first cluster in eigenvalue
/// order).
std::optional<ThetaEigenvector> pvm2_eigenvector_in_theta(const Unitary &u, const Povm &povm,
                                                          const Tolerances &tol = {});

struct TraceLimit {
    std::vector<double> sequence;  // sequence[m-1] = tr((PU)^m (PU)^{*m}), m = 1..m_max
    double spectral_value = 0.0;
    std::size_t m_max = 0;
    double convergence_gap = 0.0;  // sequence.back() - spectral_value
    double contraction_rate = 0.0; // largest |eigenvalue| < 1 of PU, 0 when none
    bool converged = false;        // |convergence_gap| <= 1e-6
};

/// Upper bound on the default number of trace-sequence terms.
inline constexpr std::size_t kMaxLemmaTerms = 1'000'000;

/// Default iteration count for the trace limit: ceil(log(target) / log(r))
/// with r the largest eigenvalue modulus of PU below 1, capped at
/// kMaxLemmaTerms.
std::size_t default_lemma_m_max(const Unitary &u, const Povm &povm, double target = 1e-9,
                                const Tolerances &tol = {});

/// Traces of (PU)^m (PU)^{*m} with P the rank d-1 projection, together with
/// their predicted limit sum_lambda dim(Theta ∩ ker(U - lambda I)). A zero
/// m_max selects default_lemma_m_max.
TraceLimit lemma_trace_limit(const Unitary &u, const Povm &povm, std::size_t m_max = 0,
                             const Tolerances &tol = {});

/// Measure of the shift-invariant set of sequences that are eventually
/// constant at the large outcome: spectral_value / d.
double nonergodic_tail_mass(const Unitary &u, const Povm &povm, const Tolerances &tol = {});

// ---------------------------------------------------------------------------
// Verdict

enum class ErgodicityStatus { Ergodic, NonErgodic, UnknownSufficientOnly };
enum class ErgodicityCriterion { Rank1Equivalence, TwoProjEquivalence, KusuokaSufficient };

std::string_view to_string(ErgodicityStatus status);
std::string_view to_string(ErgodicityCriterion criterion);

struct SubspaceWitness {
    Subspace subspace;
};

struct IndexSubsetWitness {
    std::vector<int> subset;
    Subspace subspace;  // empty when the subset search was skipped
};

struct EigenvectorWitness {
    ComplexVector v;
    Complex eigenvalue;
};

using ErgodicityWitness = std::variant<std::monostate, SubspaceWitness, IndexSubsetWitness, EigenvectorWitness>;

struct CrossCheck {
    std::string name;
    bool passed = false;
};

struct ErgodicityVerdict {
    ErgodicityStatus status = ErgodicityStatus::UnknownSufficientOnly;
    ErgodicityCriterion criterion = ErgodicityCriterion::KusuokaSufficient;
    ErgodicityWitness witness;
    AlgebraIrreducibility algebra;
    std::vector<CrossCheck> cross_checks;
    std::vector<std::string> diagnostics;

    bool all_checks_passed() const;
};

/// Dispatches on the POVM class: transition-matrix irreducibility for
/// rank-one POVMs, the eigenvector-in-Theta test for two-projection PVMs and
/// Kusuoka's sufficient condition otherwise. Every available criterion is
/// evaluated and compared; disagreements are reported as failed cross-checks.
ErgodicityVerdict ergodicity_verdict(const Pifs &pifs);

/// Re-verifies a non-ergodic witness against the system.
bool verify_witness(const Pifs &pifs, const ErgodicityWitness &witness, double tol = 1e-8);

}  // namespace kusuoka
