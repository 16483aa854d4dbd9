#pragma once

#include <string>
#include <vector>

#include "kusuoka/pifs.hpp"

namespace kusuoka {

/// Operators A_1..A_k on C^d with sum_i A_i A_i* = I.
class OperatorFamily {
  public:
    /// Validates shapes and the normalization within tol_sum.
    static OperatorFamily from_operators(std::vector<ComplexMatrix> operators, const Tolerances &tol = {});

    /// The family U* sqrt(Pi_i) of a measured unitary system.
    static OperatorFamily from_pifs(const Pifs &pifs);

    Eigen::Index dim() const { return dim_; }
    std::size_t size() const { return operators_.size(); }
    const std::vector<ComplexMatrix> &operators() const { return operators_; }
    const ComplexMatrix &at(std::size_t i) const { return operators_.at(i); }

    /// Phi(rho) = sum_i A_i* rho A_i.
    ComplexMatrix apply_dual(const ComplexMatrix &rho) const;

    /// Matrix of Phi on column-major vec(rho): sum_i A_i^T (x) A_i*.
    ComplexMatrix transfer_matrix() const;

  private:
    Eigen::Index dim_ = 0;
    std::vector<ComplexMatrix> operators_;
};

struct StationaryDensity {
    DensityMatrix rho = DensityMatrix::trusted(ComplexMatrix::Identity(1, 1));
    double residual = 0.0;  // ||Phi(rho) - rho||_HS
    /// Numerical dimension of the eigenvalue-1 eigenspace of the transfer
    /// matrix; 0 when the power-iteration path was used.
    Eigen::Index fixed_space_dim = 0;
    /// Set when the fixed space has dimension > 1: the returned density is
    /// then the spectral projection of I/d onto it, one of many fixed points.
    bool non_unique_warning = false;
    bool used_power_iteration = false;
    double min_eigenvalue = 0.0;
};

/// Largest dimension handled by the dense transfer-matrix solve.
inline constexpr Eigen::Index kTransferSolveMaxDim = 8;

/// Fixed point of Phi, Hermitized and trace-normalized. NoFixedPoint when
/// the residual stays above tol_fix.
StationaryDensity stationary_density(const OperatorFamily &family, const Tolerances &tol = {});

struct KusuokaSystem {
    OperatorFamily family;
    DensityMatrix rho;
    bool irreducible = false;
};

/// Builds the system from the stationary density. When the family is
/// irreducible the density must be unique and positive definite
/// (min eigenvalue > tol_pd); otherwise Inconsistent.
KusuokaSystem make_kusuoka_system(const OperatorFamily &family, const Tolerances &tol = {});

/// tr(A_{i_n}* ... A_{i_1}* rho A_{i_1} ... A_{i_n}); 1 for the empty string.
double kusuoka_prob(const KusuokaSystem &sys, const OutcomeString &s);

}  // namespace kusuoka
