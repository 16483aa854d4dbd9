#include "kusuoka/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kusuoka/rng.hpp"

namespace kusuoka {

namespace {

std::string at_index(std::size_t i) { return "element " + std::to_string(i + 1); }

ComplexVector dominant_eigenvector(const ComplexMatrix &a, const Tolerances &tol) {
    const auto eig = hermitian_eig(a, tol);
    return canonical_phase(eig.eigenvectors.col(a.rows() - 1), tol.tol_rank);
}

}  // namespace

// ---------------------------------------------------------------------------
// States and unitaries

DensityMatrix DensityMatrix::from_matrix(const ComplexMatrix &m, const Tolerances &tol) {
    require_hermitian(m, tol.tol_herm);
    ComplexMatrix h = (m + m.adjoint()) / 2.0;
    const double trace = h.trace().real();
    if (std::abs(trace - 1.0) > tol.tol_trace) {
        throw Error(ErrorKind::InvalidArgument, "density matrix trace " + std::to_string(trace) + " != 1");
    }
    const auto eig = hermitian_eig(h, tol);
    if (eig.eigenvalues[0].real() < -tol.tol_psd) {
        throw Error(ErrorKind::NotPsd, "density matrix has eigenvalue " +
                                           std::to_string(eig.eigenvalues[0].real()));
    }
    return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::trusted(const ComplexMatrix &m) {
    return DensityMatrix((m + m.adjoint()) / 2.0);
}

DensityMatrix DensityMatrix::pure(const ComplexVector &v) {
    const double n2 = v.squaredNorm();
    if (!(n2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "pure state from the zero vector");
    return DensityMatrix(v * v.adjoint() / n2);
}

DensityMatrix maximally_mixed(Eigen::Index d) {
    if (d < 2) throw Error(ErrorKind::BadDimension, "dimension must be at least 2, got " + std::to_string(d));
    return DensityMatrix::from_matrix(ComplexMatrix::Identity(d, d) / static_cast<double>(d));
}

Unitary Unitary::from_matrix(const ComplexMatrix &m, const Tolerances &tol) {
    require_unitary(m, tol.tol_unit);
    return Unitary(m);
}

Unitary haar_random_unitary(Eigen::Index d, std::uint64_t seed) {
    if (d < 1) throw Error(ErrorKind::BadDimension, "dimension must be positive");
    CounterRng rng(seed, static_cast<std::uint64_t>(d));
    ComplexMatrix z(d, d);
    for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(r, c) = Complex(re, im) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
    const ComplexMatrix &r = qr.matrixQR();
    for (Eigen::Index j = 0; j < d; ++j) {
        const Complex diag = r(j, j);
        const double m = std::abs(diag);
        if (m > 0) q.col(j) *= diag / m;
    }
    return Unitary(std::move(q));
}

// ---------------------------------------------------------------------------
// POVMs

std::string_view to_string(PovmTag tag) {
    switch (tag) {
        case PovmTag::General: return "General";
        case PovmTag::Pvm: return "Pvm";
        case PovmTag::RankOnePovm: return "RankOnePovm";
        case PovmTag::TwoProjRankOne: return "TwoProjRankOne";
    }
    return "General";
}

PovmKind classify_povm(const std::vector<ComplexMatrix> &elements, const Tolerances &tol) {
    PovmKind kind;
    const std::size_t k = elements.size();
    const Eigen::Index d = elements.front().rows();

    for (const auto &e : elements) kind.ranks.push_back(psd_rank(e, tol));

    kind.is_pvm = true;
    for (std::size_t i = 0; i < k && kind.is_pvm; ++i) {
        if ((elements[i] * elements[i] - elements[i]).norm() > tol.tol_recon) kind.is_pvm = false;
        for (std::size_t j = i + 1; j < k && kind.is_pvm; ++j) {
            if ((elements[i] * elements[j]).norm() > tol.tol_recon) kind.is_pvm = false;
        }
    }

    const bool all_rank_one =
        std::all_of(kind.ranks.begin(), kind.ranks.end(), [](Eigen::Index r) { return r == 1; });
    if (all_rank_one) {
        RankOneView view;
        view.scale = static_cast<double>(d) / static_cast<double>(k);
        bool ok = true;
        for (const auto &e : elements) {
            ComplexVector phi = dominant_eigenvector(e, tol);
            if ((e - view.scale * phi * phi.adjoint()).norm() > tol.tol_recon) {
                ok = false;
                break;
            }
            view.vectors.push_back(std::move(phi));
        }
        if (ok) kind.rank_one = std::move(view);
    }

    if (kind.is_pvm && k == 2 && d >= 2) {
        std::optional<std::size_t> large;
        if (kind.ranks[0] == d - 1 && kind.ranks[1] == 1) {
            large = 0;
        } else if (kind.ranks[1] == d - 1 && kind.ranks[0] == 1) {
            large = 1;
        }
        if (large) {
            TwoProjView view;
            view.large = *large;
            view.small = 1 - *large;
            view.z = dominant_eigenvector(elements[view.small], tol);
            view.theta = orth_complement(Subspace(d, view.z));
            kind.two_proj = std::move(view);
        }
    }

    if (kind.two_proj) {
        kind.tag = PovmTag::TwoProjRankOne;
    } else if (kind.rank_one) {
        kind.tag = PovmTag::RankOnePovm;
    } else if (kind.is_pvm) {
        kind.tag = PovmTag::Pvm;
    } else {
        kind.tag = PovmTag::General;
    }
    return kind;
}

Povm validate_povm(std::vector<ComplexMatrix> elements, const Tolerances &tol) {
    if (elements.empty()) throw Error(ErrorKind::InvalidArgument, "a POVM needs at least one element");
    const Eigen::Index d = elements.front().rows();
    if (d < 1) throw Error(ErrorKind::BadDimension, "POVM elements must be non-empty");

    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const auto &e = elements[i];
        if (e.rows() != d || e.cols() != d) {
            throw Error(ErrorKind::DimensionMismatch, at_index(i) + " is not " + std::to_string(d) + "x" +
                                                          std::to_string(d));
        }
        try {
            require_hermitian(e, tol.tol_herm);
        } catch (const Error &err) {
            throw Error(err.kind(), at_index(i) + ": " + err.what());
        }
        if (e.norm() <= tol.tol_psd) throw Error(ErrorKind::ZeroElement, at_index(i) + " is zero");
        const auto eig = hermitian_eig(e, tol);
        if (eig.eigenvalues[0].real() < -tol.tol_psd) {
            throw Error(ErrorKind::NotPsd, at_index(i) + " has eigenvalue " +
                                               std::to_string(eig.eigenvalues[0].real()));
        }
        sum += e;
    }
    const double residual = (sum - ComplexMatrix::Identity(d, d)).norm();
    if (residual > tol.tol_sum) {
        throw Error(ErrorKind::SumNotIdentity, "||sum - I||_HS = " + std::to_string(residual));
    }

    Povm povm;
    povm.dim_ = d;
    povm.kind_ = classify_povm(elements, tol);
    povm.elements_ = std::move(elements);
    return povm;
}

Povm rank_one_povm(const std::vector<ComplexVector> &vectors, const Tolerances &tol) {
    if (vectors.empty()) throw Error(ErrorKind::InvalidArgument, "no vectors given");
    const Eigen::Index d = vectors.front().size();
    const double scale = static_cast<double>(d) / static_cast<double>(vectors.size());
    std::vector<ComplexMatrix> elements;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (vectors[i].size() != d) throw Error(ErrorKind::DimensionMismatch, "vector " + std::to_string(i + 1));
        const double n = vectors[i].norm();
        if (!(n > 0.0)) throw Error(ErrorKind::ZeroElement, "vector " + std::to_string(i + 1) + " is zero");
        const ComplexVector phi = vectors[i] / n;
        elements.push_back(scale * phi * phi.adjoint());
    }
    return validate_povm(std::move(elements), tol);
}

Povm pvm_from_basis(const ComplexMatrix &basis, const std::vector<Eigen::Index> &block_sizes,
                    const Tolerances &tol) {
    require_unitary(basis, tol.tol_unit);
    const Eigen::Index total = std::accumulate(block_sizes.begin(), block_sizes.end(), Eigen::Index{0});
    if (total != basis.cols()) {
        throw Error(ErrorKind::InvalidArgument, "block sizes sum to " + std::to_string(total) +
                                                    ", expected " + std::to_string(basis.cols()));
    }
    std::vector<ComplexMatrix> elements;
    Eigen::Index start = 0;
    for (auto size : block_sizes) {
        if (size <= 0) throw Error(ErrorKind::InvalidArgument, "block sizes must be positive");
        const auto block = basis.middleCols(start, size);
        elements.push_back(block * block.adjoint());
        start += size;
    }
    return validate_povm(std::move(elements), tol);
}

}  // namespace kusuoka
