#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kusuoka/pifs.hpp"

namespace kusuoka {

/// A unitary and a POVM, ready to become a Pifs.
struct Instance {
    Unitary u;
    Povm povm;
    std::string label;

    Pifs pifs(const Tolerances &tol = {}) const { return Pifs(u, povm, tol); }
};

/// Haar-distributed unit vector in C^d.
ComplexVector haar_random_vector(Eigen::Index d, std::uint64_t seed);

/// d = 3 system with U = diag(1, i, -1) and the PVM {e1e1* + e2e2*, e3e3*}.
/// Every basis vector is an eigenvector of U, so outcome strings are
/// constant.
Instance diagonal_qutrit_instance();

/// Hadamard unitary with the computational-basis PVM.
Instance hadamard_qubit_instance();

/// Qubit with a rank-one PVM given by the orthonormal basis `basis`.
Instance qubit_pvm_instance(const Unitary &u, const ComplexMatrix &basis);

/// The symmetric three-outcome qubit POVM (trine) with the given unitary.
Instance trine_instance(const Unitary &u);

/// Tight frame of k unit vectors phi_i = d^{-1/2} (w^{i n})_{n < d},
/// w = exp(2 pi i / k), rotated by `rotation`. Requires k >= d.
std::vector<ComplexVector> harmonic_frame(Eigen::Index d, Eigen::Index k, const ComplexMatrix &rotation);

/// Haar unitary with a randomly rotated harmonic frame of k vectors.
Instance random_rank_one_instance(Eigen::Index d, Eigen::Index k, std::uint64_t seed);

/// Rank-one instance with a common invariant subspace of dimension a: U and
/// the frame are block diagonal with respect to a random splitting
/// C^d = W + W^perp. nullopt unless some 1 <= a < d makes a k / d an integer.
std::optional<Instance> random_reducible_rank_one_instance(Eigen::Index d, Eigen::Index k, std::uint64_t seed);

enum class TwoProjMode {
    Generic,            // Haar U and Haar z
    EigenvectorInTheta, // z combines a proper subset of U's eigenvectors
    DegenerateSpectrum, // U has a repeated eigenvalue (needs d >= 3)
};

/// PVM {I - zz*, zz*} with unitary chosen by `mode`.
Instance random_two_proj_instance(Eigen::Index d, std::uint64_t seed, TwoProjMode mode);

/// Full-rank POVM with k elements S^{-1/2} G_i S^{-1/2}, G_i = X_i X_i*.
Instance random_general_instance(Eigen::Index d, Eigen::Index k, std::uint64_t seed);

/// PVM onto consecutive blocks of a Haar basis, with a Haar unitary.
Instance random_block_pvm_instance(const std::vector<Eigen::Index> &block_sizes, std::uint64_t seed);

/// Operators A_i = B_i* where the B_i are the d x d blocks of the first d
/// columns of a Haar kd x kd unitary, so sum A_i A_i* = I and the dual map
/// is generically not unital.
std::vector<ComplexMatrix> random_isometry_family(Eigen::Index d, Eigen::Index k, std::uint64_t seed);

/// V1 A_i V2 for Haar V1, V2.
std::vector<ComplexMatrix> twirled_family(const std::vector<ComplexMatrix> &family, std::uint64_t seed);

}  // namespace kusuoka
