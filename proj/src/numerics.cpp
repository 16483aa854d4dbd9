#include "kusuoka/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace kusuoka {

namespace {

std::string describe(double value) {
    std::ostringstream out;
    out.precision(3);
    out << value;
    return out.str();
}

void require_square(const ComplexMatrix &a) {
    if (a.rows() == 0 || a.rows() != a.cols()) {
        throw Error(ErrorKind::BadDimension, "expected a non-empty square matrix, got " +
                                                 std::to_string(a.rows()) + "x" +
                                                 std::to_string(a.cols()));
    }
}

// Union-find over eigenvalue indices.
struct Components {
    std::vector<Eigen::Index> parent;

    explicit Components(Eigen::Index n) : parent(static_cast<std::size_t>(n)) {
        std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    }
    Eigen::Index root(Eigen::Index i) {
        while (parent[i] != i) {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        return i;
    }
    void join(Eigen::Index a, Eigen::Index b) { parent[root(a)] = root(b); }
};

template <typename Distance>
std::vector<EigenCluster> single_linkage(const ComplexVector &values, double tol, Distance distance) {
    const Eigen::Index n = values.size();
    Components comps(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            if (distance(values[a], values[b]) <= tol) comps.join(a, b);
        }
    }
    // Clusters are listed in order of their smallest member index.
    std::vector<EigenCluster> clusters;
    std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index r = comps.root(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<Eigen::Index>(clusters.size());
            clusters.push_back({});
        }
        clusters[slot[r]].indices.push_back(i);
    }
    for (auto &c : clusters) {
        Complex sum{0.0, 0.0};
        for (auto i : c.indices) sum += values[i];
        c.representative = sum / static_cast<double>(c.indices.size());
    }
    return clusters;
}

double angle_in_turn(Complex z) {
    double a = std::arg(z);
    if (a < 0) a += 2 * std::numbers::pi;
    // arg of a value just below the positive real axis rounds to 2*pi
    if (a >= 2 * std::numbers::pi) a = 0;
    return a;
}

}  // namespace

double hs_norm(const ComplexMatrix &a) { return a.norm(); }

bool all_finite(const ComplexMatrix &a) { return a.allFinite(); }

void require_hermitian(const ComplexMatrix &a, double tol) {
    require_square(a);
    if (!a.allFinite()) throw Error(ErrorKind::NotHermitian, "matrix has non-finite entries");
    const double asym = (a - a.adjoint()).norm();
    if (asym > tol * a.norm()) {
        throw Error(ErrorKind::NotHermitian, "||A - A*||_HS = " + describe(asym));
    }
}

void require_unitary(const ComplexMatrix &u, double tol) {
    require_square(u);
    if (!u.allFinite()) throw Error(ErrorKind::NotUnitary, "matrix has non-finite entries");
    const auto d = u.rows();
    const double defect = (u.adjoint() * u - ComplexMatrix::Identity(d, d)).norm();
    if (defect > tol) {
        throw Error(ErrorKind::NotUnitary, "||U*U - I||_HS = " + describe(defect));
    }
}

// ---------------------------------------------------------------------------
// Subspaces

Subspace::Subspace(Eigen::Index ambient_dim, ComplexMatrix basis)
    : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.cols() == 0) basis_.resize(ambient_dim_, 0);
    if (basis_.rows() != ambient_dim_) {
        throw Error(ErrorKind::DimensionMismatch, "basis rows do not match ambient dimension");
    }
}

Subspace Subspace::trivial(Eigen::Index ambient_dim) {
    return Subspace(ambient_dim, ComplexMatrix(ambient_dim, 0));
}

Subspace Subspace::full(Eigen::Index ambient_dim) {
    return Subspace(ambient_dim, ComplexMatrix::Identity(ambient_dim, ambient_dim));
}

ComplexMatrix Subspace::projector() const { return basis_ * basis_.adjoint(); }

ComplexVector Subspace::residual(const ComplexVector &v) const {
    if (v.size() != ambient_dim_) {
        throw Error(ErrorKind::DimensionMismatch, "vector length does not match ambient dimension");
    }
    if (is_trivial()) return v;
    return v - basis_ * (basis_.adjoint() * v);
}

Subspace orthonormalize(const ComplexMatrix &vectors, double tol_rank) {
    const Eigen::Index d = vectors.rows();
    ComplexMatrix q(d, std::min(d, vectors.cols()));
    Eigen::Index rank = 0;
    for (Eigen::Index c = 0; c < vectors.cols() && rank < d; ++c) {
        ComplexVector r = vectors.col(c);
        // two passes of classical Gram-Schmidt keep the basis orthogonal to
        // working precision
        for (int pass = 0; pass < 2 && rank > 0; ++pass) {
            r -= q.leftCols(rank) * (q.leftCols(rank).adjoint() * r);
        }
        const double norm = r.norm();
        if (norm > tol_rank) {
            q.col(rank++) = r / norm;
        }
    }
    return Subspace(d, q.leftCols(rank));
}

Subspace image(const ComplexMatrix &a, const Subspace &w, double tol_rank) {
    if (a.cols() != w.ambient_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "operator and subspace dimensions differ");
    }
    if (w.is_trivial()) return Subspace::trivial(a.rows());
    return orthonormalize(a * w.basis(), tol_rank);
}

Subspace orth_complement(const Subspace &w) {
    const Eigen::Index d = w.ambient_dim();
    if (w.is_trivial()) return Subspace::full(d);
    if (w.is_full()) return Subspace::trivial(d);
    Eigen::HouseholderQR<ComplexMatrix> qr(w.basis());
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
    return Subspace(d, q.rightCols(d - w.dim()));
}

bool contains_vector(const Subspace &w, const ComplexVector &v, double tol) {
    return w.residual(v).norm() <= tol * v.norm();
}

bool contains_subspace(const Subspace &outer, const Subspace &inner, double tol) {
    if (outer.ambient_dim() != inner.ambient_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "subspaces live in different spaces");
    }
    for (Eigen::Index c = 0; c < inner.dim(); ++c) {
        if (!contains_vector(outer, inner.basis().col(c), tol)) return false;
    }
    return true;
}

Eigen::Index intersect_dim(const Subspace &w1, const Subspace &w2, double tol_rank) {
    if (w1.ambient_dim() != w2.ambient_dim()) {
        throw Error(ErrorKind::DimensionMismatch, "subspaces live in different spaces");
    }
    ComplexMatrix both(w1.ambient_dim(), w1.dim() + w2.dim());
    both << w1.basis(), w2.basis();
    const Eigen::Index joint = orthonormalize(both, tol_rank).dim();
    return std::max<Eigen::Index>(0, w1.dim() + w2.dim() - joint);
}

// ---------------------------------------------------------------------------
// Spectral decompositions

Subspace SpectralDecomposition::eigenspace(std::size_t cluster) const {
    const auto &idx = clusters.at(cluster).indices;
    ComplexMatrix basis(eigenvectors.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) basis.col(static_cast<Eigen::Index>(j)) = eigenvectors.col(idx[j]);
    return Subspace(eigenvectors.rows(), std::move(basis));
}

SpectralDecomposition hermitian_eig(const ComplexMatrix &a, const Tolerances &tol) {
    require_hermitian(a, tol.tol_herm);
    const ComplexMatrix h = (a + a.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::NoConvergence, "Hermitian eigensolver did not converge");
    }
    SpectralDecomposition out;
    out.eigenvalues = solver.eigenvalues().cast<Complex>();
    out.eigenvectors = solver.eigenvectors();
    const double residual =
        (a - out.eigenvectors * out.eigenvalues.asDiagonal() * out.eigenvectors.adjoint()).norm();
    if (residual > tol.tol_recon * a.norm()) {
        throw Error(ErrorKind::NoConvergence, "Hermitian reconstruction residual " + describe(residual));
    }
    out.clusters = single_linkage(out.eigenvalues, tol.tol_cluster,
                                  [](Complex x, Complex y) { return std::abs(x.real() - y.real()); });
    return out;
}

SpectralDecomposition unitary_eig(const ComplexMatrix &u, const Tolerances &tol) {
    require_unitary(u, tol.tol_unit);
    const Eigen::Index d = u.rows();

    // A unitary matrix is normal, so its complex Schur form is diagonal and the
    // Schur vectors are an orthonormal eigenbasis, including inside degenerate
    // eigenspaces where a general eigensolver may return skewed vectors.
    Eigen::ComplexSchur<ComplexMatrix> schur(u);
    if (schur.info() != Eigen::Success) {
        throw Error(ErrorKind::NoConvergence, "Schur decomposition did not converge");
    }
    const ComplexMatrix &t = schur.matrixT();
    const ComplexMatrix &q = schur.matrixU();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
        return angle_in_turn(t(x, x)) < angle_in_turn(t(y, y));
    });

    SpectralDecomposition out;
    out.eigenvalues.resize(d);
    out.eigenvectors.resize(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        out.eigenvalues[j] = t(order[j], order[j]);
        out.eigenvectors.col(j) = q.col(order[j]);
    }
    const double residual =
        (u * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal()).norm();
    if (residual > tol.tol_recon * std::sqrt(static_cast<double>(d))) {
        throw Error(ErrorKind::NoConvergence, "unitary eigen-residual " + describe(residual));
    }
    out.clusters = single_linkage(out.eigenvalues, tol.tol_cluster, [](Complex x, Complex y) {
        return std::abs(std::arg(x * std::conj(y)));
    });
    for (auto &c : out.clusters) {
        if (std::abs(c.representative) > 0) c.representative /= std::abs(c.representative);
    }
    return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix &a, const Tolerances &tol) {
    const auto eig = hermitian_eig(a, tol);
    const Eigen::Index d = a.rows();
    RealVector roots(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        const double lambda = eig.eigenvalues[j].real();
        if (lambda < -tol.tol_psd) {
            throw Error(ErrorKind::NotPsd, "eigenvalue " + describe(lambda) + " below -tol_psd");
        }
        // Rounding leaves eigenvalues of order 1e-16 on exact null spaces;
        // their square roots (1e-8) would otherwise pollute the result.
        roots[j] = lambda <= tol.tol_psd ? 0.0 : std::sqrt(lambda);
    }
    ComplexMatrix s = eig.eigenvectors * roots.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    return (s + s.adjoint()) / 2.0;
}

Eigen::Index psd_rank(const ComplexMatrix &a, const Tolerances &tol) {
    const auto eig = hermitian_eig(a, tol);
    Eigen::Index rank = 0;
    for (Eigen::Index j = 0; j < eig.eigenvalues.size(); ++j) {
        if (eig.eigenvalues[j].real() > tol.tol_psd) ++rank;
    }
    return rank;
}

ComplexVector canonical_phase(const ComplexVector &v, double tol) {
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        const double m = std::abs(v[j]);
        if (m > tol) return v * (std::conj(v[j]) / m);
    }
    return v;
}

}  // namespace kusuoka
