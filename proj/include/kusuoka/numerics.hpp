#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "kusuoka/error.hpp"
#include "kusuoka/tolerances.hpp"

namespace kusuoka {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Hilbert-Schmidt (Frobenius) norm.
double hs_norm(const ComplexMatrix &a);

/// Throws NotHermitian/BadDimension unless `a` is square and Hermitian within
/// `tol` relative to its norm.
void require_hermitian(const ComplexMatrix &a, double tol);

/// Throws NotUnitary unless ||U*U - I||_HS <= tol.
void require_unitary(const ComplexMatrix &u, double tol);

bool all_finite(const ComplexMatrix &a);

/// Orthonormal basis of a linear subspace of C^d. The trivial subspace has a
/// d x 0 basis.
class Subspace {
  public:
    Subspace() = default;

    /// Takes `basis` as already orthonormal; use `orthonormalize` otherwise.
    Subspace(Eigen::Index ambient_dim, ComplexMatrix basis);

    static Subspace trivial(Eigen::Index ambient_dim);
    static Subspace full(Eigen::Index ambient_dim);

    Eigen::Index ambient_dim() const { return ambient_dim_; }
    Eigen::Index dim() const { return basis_.cols(); }
    bool is_trivial() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_dim_; }
    const ComplexMatrix &basis() const { return basis_; }

    /// Orthogonal projector onto the subspace.
    ComplexMatrix projector() const;

    /// v minus its orthogonal projection onto the subspace.
    ComplexVector residual(const ComplexVector &v) const;

  private:
    Eigen::Index ambient_dim_ = 0;
    ComplexMatrix basis_;
};

/// Orthonormal basis for the span of the columns of `vectors`. Columns are
/// processed in order; a column whose residual after projecting out the
/// accepted directions has norm <= tol_rank is dropped.
Subspace orthonormalize(const ComplexMatrix &vectors, double tol_rank);

/// Orthonormalized span of A applied to the basis of W.
Subspace image(const ComplexMatrix &a, const Subspace &w, double tol_rank);

Subspace orth_complement(const Subspace &w);

/// ||v - P_W v|| <= tol * ||v||. The zero vector is contained in every subspace.
bool contains_vector(const Subspace &w, const ComplexVector &v, double tol);

/// True when every basis vector of `inner` lies in `outer`.
bool contains_subspace(const Subspace &outer, const Subspace &inner, double tol);

/// dim W1 + dim W2 - dim(W1 + W2), clamped to >= 0.
Eigen::Index intersect_dim(const Subspace &w1, const Subspace &w2, double tol_rank);

/// Degenerate eigenvalue group: indices into the decomposition and a
/// representative value (the mean of the group, projected to the unit circle
/// for unitary input).
struct EigenCluster {
    std::vector<Eigen::Index> indices;
    Complex representative;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(indices.size()); }
};

struct SpectralDecomposition {
    ComplexVector eigenvalues;
    ComplexMatrix eigenvectors;  // orthonormal columns
    std::vector<EigenCluster> clusters;

    /// Orthonormal basis of the eigenspace of one cluster.
    Subspace eigenspace(std::size_t cluster) const;
};

/// Eigendecomposition of a Hermitian matrix; eigenvalues real and ascending.
SpectralDecomposition hermitian_eig(const ComplexMatrix &a, const Tolerances &tol = {});

/// Eigendecomposition of a unitary matrix with eigenvalues ordered by
/// argument in [0, 2*pi). Clusters are single-linkage components under
/// angular distance <= tol.tol_cluster.
SpectralDecomposition unitary_eig(const ComplexMatrix &u, const Tolerances &tol = {});

/// Square root of a PSD matrix. Eigenvalues in [-tol_psd, tol_psd] are set
/// to zero; anything more negative raises NotPsd.
ComplexMatrix psd_sqrt(const ComplexMatrix &a, const Tolerances &tol = {});

/// Eigenvalues below tol_psd count as zero.
Eigen::Index psd_rank(const ComplexMatrix &a, const Tolerances &tol = {});

/// Multiplies v by the phase that makes its first coordinate with modulus
/// above `tol` real and positive.
ComplexVector canonical_phase(const ComplexVector &v, double tol = 1e-12);

}  // namespace kusuoka
