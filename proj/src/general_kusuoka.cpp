#include "kusuoka/general_kusuoka.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "kusuoka/ergodicity.hpp"

namespace kusuoka {

OperatorFamily OperatorFamily::from_operators(std::vector<ComplexMatrix> operators, const Tolerances &tol) {
    if (operators.empty()) throw Error(ErrorKind::InvalidArgument, "empty operator family");
    const Eigen::Index d = operators.front().rows();
    if (d < 1) throw Error(ErrorKind::BadDimension, "operators must be at least 1 x 1");
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < operators.size(); ++i) {
        const auto &a = operators[i];
        if (a.rows() != d || a.cols() != d) {
            throw Error(ErrorKind::DimensionMismatch, "operator " + std::to_string(i + 1) + " is not " +
                                                          std::to_string(d) + " x " + std::to_string(d));
        }
        if (!all_finite(a)) throw Error(ErrorKind::InvalidArgument, "operator " + std::to_string(i + 1) + " is not finite");
        sum += a * a.adjoint();
    }
    const double defect = (sum - ComplexMatrix::Identity(d, d)).norm();
    if (defect > tol.tol_sum) {
        throw Error(ErrorKind::SumNotIdentity, "sum of A_i A_i* differs from I by " + std::to_string(defect));
    }
    OperatorFamily family;
    family.dim_ = d;
    family.operators_ = std::move(operators);
    return family;
}

OperatorFamily OperatorFamily::from_pifs(const Pifs &pifs) {
    return from_operators(pifs.kusuoka_family(), pifs.tolerances());
}

ComplexMatrix OperatorFamily::apply_dual(const ComplexMatrix &rho) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
    for (const auto &a : operators_) out.noalias() += a.adjoint() * rho * a;
    return out;
}

ComplexMatrix OperatorFamily::transfer_matrix() const {
    const Eigen::Index d = dim_;
    ComplexMatrix t = ComplexMatrix::Zero(d * d, d * d);
    for (const auto &a : operators_) {
        const ComplexMatrix adj = a.adjoint();
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) {
                t.block(r * d, c * d, d, d) += a(c, r) * adj;
            }
        }
    }
    return t;
}

namespace {

DensityMatrix normalized_density(ComplexMatrix m) {
    m = (m + m.adjoint()).eval() * 0.5;
    const Complex trace = m.trace();
    if (std::abs(trace) == 0.0) throw Error(ErrorKind::NoFixedPoint, "fixed point has zero trace");
    return DensityMatrix::trusted(m / trace.real());
}

double min_eigenvalue(const DensityMatrix &rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

}  // namespace

StationaryDensity stationary_density(const OperatorFamily &family, const Tolerances &tol) {
    const Eigen::Index d = family.dim();
    const ComplexMatrix start = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    StationaryDensity out;

    if (d <= kTransferSolveMaxDim) {
        const Eigen::Index n = d * d;
        const ComplexMatrix shifted = family.transfer_matrix() - ComplexMatrix::Identity(n, n);
        Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const auto &sigma = svd.singularValues();
        const double cutoff = tol.tol_rank * std::max(1.0, sigma(0));
        Eigen::Index nullity = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (sigma(j) <= cutoff) ++nullity;
        }
        if (nullity == 0) throw Error(ErrorKind::NoFixedPoint, "transfer matrix has no eigenvalue 1");

        // Spectral projection of vec(I/d) onto ker(T - I) along range(T - I).
        const ComplexMatrix right = svd.matrixV().rightCols(nullity);
        const ComplexMatrix left = svd.matrixU().rightCols(nullity);
        const ComplexMatrix gram = left.adjoint() * right;
        const ComplexVector v0 = Eigen::Map<const ComplexVector>(start.data(), n);
        const ComplexVector coeffs = gram.fullPivLu().solve(left.adjoint() * v0);
        const ComplexVector fixed = right * coeffs;
        out.rho = normalized_density(Eigen::Map<const ComplexMatrix>(fixed.data(), d, d));
        out.fixed_space_dim = nullity;
        out.non_unique_warning = nullity > 1;
    } else {
        // Lazy iteration rho <- (rho + Phi(rho)) / 2 removes the other
        // peripheral eigenvalues and keeps the fixed points.
        out.used_power_iteration = true;
        ComplexMatrix rho = start;
        for (int it = 0; it < 200000; ++it) {
            const ComplexMatrix next = 0.5 * (rho + family.apply_dual(rho));
            const double step = (next - rho).norm();
            rho = next;
            if (step <= 0.25 * tol.tol_fix) break;
        }
        out.rho = normalized_density(rho);
    }

    out.residual = (family.apply_dual(out.rho.matrix()) - out.rho.matrix()).norm();
    if (!(out.residual <= tol.tol_fix)) {
        throw Error(ErrorKind::NoFixedPoint, "fixed-point residual " + std::to_string(out.residual));
    }
    out.min_eigenvalue = min_eigenvalue(out.rho);
    return out;
}

KusuokaSystem make_kusuoka_system(const OperatorFamily &family, const Tolerances &tol) {
    const StationaryDensity fixed = stationary_density(family, tol);
    const bool irreducible = algebra_irreducible(family.operators(), tol).irreducible;
    if (irreducible && (fixed.non_unique_warning || fixed.min_eigenvalue <= tol.tol_pd)) {
        throw Error(ErrorKind::Inconsistent, "irreducible family without a unique positive-definite fixed point");
    }
    return KusuokaSystem{family, fixed.rho, irreducible};
}

double kusuoka_prob(const KusuokaSystem &sys, const OutcomeString &s) {
    const Eigen::Index d = sys.family.dim();
    ComplexMatrix m = ComplexMatrix::Identity(d, d);
    for (int sym : s.symbols()) {
        if (sym < 0 || static_cast<std::size_t>(sym) >= sys.family.size()) {
            throw Error(ErrorKind::InvalidArgument, "outcome index " + std::to_string(sym + 1) + " out of range");
        }
        m = m * sys.family.at(static_cast<std::size_t>(sym));
    }
    return std::clamp((m.adjoint() * sys.rho.matrix() * m).trace().real(), 0.0, 1.0);
}

}  // namespace kusuoka
