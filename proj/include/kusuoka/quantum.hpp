#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kusuoka/numerics.hpp"

namespace kusuoka {

/// Hermitian PSD operator with unit trace.
class DensityMatrix {
  public:
    /// Validates Hermiticity, positivity and trace; the stored matrix is the
    /// Hermitian part of `m`.
    static DensityMatrix from_matrix(const ComplexMatrix &m, const Tolerances &tol = {});

    /// Skips validation; only takes the Hermitian part. For states produced
    /// by trace-preserving maps of valid states.
    static DensityMatrix trusted(const ComplexMatrix &m);

    /// Rank-one state |v><v| / <v,v>.
    static DensityMatrix pure(const ComplexVector &v);

    Eigen::Index dim() const { return matrix_.rows(); }
    const ComplexMatrix &matrix() const { return matrix_; }

  private:
    explicit DensityMatrix(ComplexMatrix m) : matrix_(std::move(m)) {}
    ComplexMatrix matrix_;
};

/// The maximally mixed state I/d; BadDimension for d < 2.
DensityMatrix maximally_mixed(Eigen::Index d);

class Unitary {
  public:
    static Unitary from_matrix(const ComplexMatrix &m, const Tolerances &tol = {});

    Eigen::Index dim() const { return matrix_.rows(); }
    const ComplexMatrix &matrix() const { return matrix_; }

  private:
    friend Unitary haar_random_unitary(Eigen::Index d, std::uint64_t seed);
    explicit Unitary(ComplexMatrix m) : matrix_(std::move(m)) {}
    ComplexMatrix matrix_;
};

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of R's diagonal moved into Q. Deterministic per (d, seed).
Unitary haar_random_unitary(Eigen::Index d, std::uint64_t seed);

enum class PovmTag { General, Pvm, RankOnePovm, TwoProjRankOne };

std::string_view to_string(PovmTag tag);

/// Elements (d/k)|phi_i><phi_i| with unit phi_i in canonical phase.
struct RankOneView {
    std::vector<ComplexVector> vectors;
    double scale = 0.0;  // d/k
};

/// PVM {P_large, P_small} with rank P_large = d-1 and rank P_small = 1.
/// `z` spans the range of P_small and `theta` is its orthogonal complement.
struct TwoProjView {
    std::size_t large = 0;
    std::size_t small = 1;
    ComplexVector z;
    Subspace theta;
};

/// Every measurement class a POVM belongs to. `tag` is the most specific
/// one (TwoProjRankOne > RankOnePovm > Pvm > General); the views stay
/// populated for all classes that apply, so a two-element qubit PVM carries
/// both the rank-one and the two-projection description.
struct PovmKind {
    PovmTag tag = PovmTag::General;
    std::vector<Eigen::Index> ranks;
    bool is_pvm = false;
    std::optional<RankOneView> rank_one;
    std::optional<TwoProjView> two_proj;
};

class Povm {
  public:
    Eigen::Index dim() const { return dim_; }
    std::size_t size() const { return elements_.size(); }
    const std::vector<ComplexMatrix> &elements() const { return elements_; }
    const ComplexMatrix &element(std::size_t i) const { return elements_.at(i); }
    const PovmKind &kind() const { return kind_; }

  private:
    friend Povm validate_povm(std::vector<ComplexMatrix> elements, const Tolerances &tol);
    Eigen::Index dim_ = 0;
    std::vector<ComplexMatrix> elements_;
    PovmKind kind_;
};

/// Checks that the elements are non-zero Hermitian PSD operators summing to
/// the identity, then classifies them. Errors carry the offending index in
/// their message.
Povm validate_povm(std::vector<ComplexMatrix> elements, const Tolerances &tol = {});

/// Classification of already validated elements.
PovmKind classify_povm(const std::vector<ComplexMatrix> &elements, const Tolerances &tol = {});

/// Rank-one POVM with elements (d/k)|v_i><v_i| after normalizing each v_i.
Povm rank_one_povm(const std::vector<ComplexVector> &vectors, const Tolerances &tol = {});

/// Projections onto consecutive column blocks of an orthonormal basis.
Povm pvm_from_basis(const ComplexMatrix &basis, const std::vector<Eigen::Index> &block_sizes,
                    const Tolerances &tol = {});

}  // namespace kusuoka
