#include "kusuoka/instances.hpp"

#include <cmath>
#include <numbers>
#include <utility>

#include "kusuoka/rng.hpp"

namespace kusuoka {

namespace {

std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) { return mix64(seed * 0x9E3779B97F4A7C15ULL + tag); }

ComplexMatrix haar(Eigen::Index d, std::uint64_t seed, std::uint64_t tag) {
    return haar_random_unitary(d, derive(seed, tag)).matrix();
}

ComplexMatrix with_eigenphases(const ComplexMatrix &v, const std::vector<double> &phases) {
    ComplexVector diag(v.cols());
    for (Eigen::Index j = 0; j < v.cols(); ++j) diag(j) = std::polar(1.0, phases[static_cast<std::size_t>(j)]);
    return v * diag.asDiagonal() * v.adjoint();
}

Instance two_proj_from_z(const Unitary &u, const ComplexVector &z, std::string label) {
    const Eigen::Index d = z.size();
    const ComplexVector unit = z / z.norm();
    const Subspace theta = orth_complement(Subspace(d, unit));
    ComplexMatrix basis(d, d);
    basis.leftCols(d - 1) = theta.basis();
    basis.col(d - 1) = unit;
    return Instance{u, pvm_from_basis(basis, {d - 1, 1}), std::move(label)};
}

}  // namespace

ComplexVector haar_random_vector(Eigen::Index d, std::uint64_t seed) {
    return haar_random_unitary(d, derive(seed, 0x7A)).matrix().col(0);
}

Instance diagonal_qutrit_instance() {
    ComplexMatrix u = ComplexMatrix::Zero(3, 3);
    u(0, 0) = 1.0;
    u(1, 1) = Complex(0.0, 1.0);
    u(2, 2) = -1.0;
    return Instance{Unitary::from_matrix(u), pvm_from_basis(ComplexMatrix::Identity(3, 3), {2, 1}), "diagonal-qutrit"};
}

Instance hadamard_qubit_instance() {
    ComplexMatrix h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    h /= std::sqrt(2.0);
    return Instance{Unitary::from_matrix(h), pvm_from_basis(ComplexMatrix::Identity(2, 2), {1, 1}), "hadamard-qubit"};
}

Instance qubit_pvm_instance(const Unitary &u, const ComplexMatrix &basis) {
    return Instance{u, pvm_from_basis(basis, {1, 1}), "qubit-pvm"};
}

Instance trine_instance(const Unitary &u) {
    std::vector<ComplexVector> vectors;
    for (int j = 0; j < 3; ++j) {
        const double angle = 2.0 * std::numbers::pi * j / 3.0;
        ComplexVector v(2);
        v << std::cos(angle), std::sin(angle);
        vectors.push_back(v);
    }
    return Instance{u, rank_one_povm(vectors), "trine"};
}

std::vector<ComplexVector> harmonic_frame(Eigen::Index d, Eigen::Index k, const ComplexMatrix &rotation) {
    if (k < d) throw Error(ErrorKind::InvalidArgument, "a tight frame needs at least d vectors");
    std::vector<ComplexVector> out;
    for (Eigen::Index i = 0; i < k; ++i) {
        ComplexVector phi(d);
        for (Eigen::Index n = 0; n < d; ++n) {
            phi(n) = std::polar(1.0 / std::sqrt(static_cast<double>(d)),
                                2.0 * std::numbers::pi * static_cast<double>(i * n) / static_cast<double>(k));
        }
        out.push_back(rotation * phi);
    }
    return out;
}

Instance random_rank_one_instance(Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
    const Unitary u = haar_random_unitary(d, derive(seed, 1));
    const auto frame = harmonic_frame(d, k, haar(d, seed, 2));
    return Instance{u, rank_one_povm(frame),
                    "rank1 d=" + std::to_string(d) + " k=" + std::to_string(k) + " seed=" + std::to_string(seed)};
}

std::optional<Instance> random_reducible_rank_one_instance(Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
    Eigen::Index a = 0;
    for (Eigen::Index cand = 1; cand < d; ++cand) {
        if ((cand * k) % d == 0) {
            a = cand;
            break;
        }
    }
    if (a == 0) return std::nullopt;
    const Eigen::Index b = d - a;
    const Eigen::Index ka = a * k / d;
    const Eigen::Index kb = k - ka;

    const ComplexMatrix v = haar(d, seed, 3);
    ComplexMatrix block = ComplexMatrix::Zero(d, d);
    block.topLeftCorner(a, a) = haar(a, seed, 4);
    block.bottomRightCorner(b, b) = haar(b, seed, 5);
    const Unitary u = Unitary::from_matrix(v * block * v.adjoint());

    std::vector<ComplexVector> frame;
    for (const auto &phi : harmonic_frame(a, ka, haar(a, seed, 6))) frame.push_back(v.leftCols(a) * phi);
    for (const auto &phi : harmonic_frame(b, kb, haar(b, seed, 7))) frame.push_back(v.rightCols(b) * phi);

    CounterRng rng(derive(seed, 8), 0);
    for (std::size_t i = frame.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(frame[i - 1], frame[j]);
    }
    return Instance{u, rank_one_povm(frame),
                    "reducible rank1 d=" + std::to_string(d) + " k=" + std::to_string(k) + " seed=" +
                        std::to_string(seed)};
}

Instance random_two_proj_instance(Eigen::Index d, std::uint64_t seed, TwoProjMode mode) {
    if (d < 2) throw Error(ErrorKind::BadDimension, "dimension must be at least 2");
    const std::string suffix = " d=" + std::to_string(d) + " seed=" + std::to_string(seed);
    if (mode == TwoProjMode::Generic) {
        return two_proj_from_z(haar_random_unitary(d, derive(seed, 10)), haar_random_vector(d, derive(seed, 11)),
                               "two-proj generic" + suffix);
    }

    CounterRng rng(derive(seed, 12), 0);
    std::vector<double> phases(static_cast<std::size_t>(d));
    for (double &p : phases) p = 2.0 * std::numbers::pi * rng.uniform_open_closed();
    const ComplexMatrix v = haar(d, seed, 13);

    if (mode == TwoProjMode::DegenerateSpectrum) {
        phases[1] = phases[0];
        return two_proj_from_z(Unitary::from_matrix(with_eigenphases(v, phases)),
                               haar_random_vector(d, derive(seed, 14)), "two-proj degenerate" + suffix);
    }

    const Eigen::Index s = 1 + static_cast<Eigen::Index>(rng.next_u64() % static_cast<std::uint64_t>(d - 1));
    const ComplexVector c = haar_random_vector(s, derive(seed, 15));
    const ComplexVector z = v.leftCols(s) * c;
    return two_proj_from_z(Unitary::from_matrix(with_eigenphases(v, phases)), z, "two-proj eigenvector" + suffix);
}

Instance random_general_instance(Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
    CounterRng rng(derive(seed, 20), 0);
    std::vector<ComplexMatrix> g;
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < k; ++i) {
        ComplexMatrix x(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) {
                const double re = rng.normal();
                x(r, c) = Complex(re, rng.normal());
            }
        }
        g.push_back(x * x.adjoint());
        sum += g.back();
    }
    const auto eig = hermitian_eig(sum);
    RealVector inv_sqrt = eig.eigenvalues.real().cwiseSqrt().cwiseInverse();
    const ComplexMatrix s_inv_half = eig.eigenvectors * inv_sqrt.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
    std::vector<ComplexMatrix> elements;
    for (const auto &gi : g) {
        ComplexMatrix e = s_inv_half * gi * s_inv_half;
        elements.push_back((e + e.adjoint()) * 0.5);
    }
    return Instance{haar_random_unitary(d, derive(seed, 21)), validate_povm(std::move(elements)),
                    "general d=" + std::to_string(d) + " k=" + std::to_string(k) + " seed=" + std::to_string(seed)};
}

Instance random_block_pvm_instance(const std::vector<Eigen::Index> &block_sizes, std::uint64_t seed) {
    Eigen::Index d = 0;
    for (auto b : block_sizes) d += b;
    return Instance{haar_random_unitary(d, derive(seed, 30)), pvm_from_basis(haar(d, seed, 31), block_sizes),
                    "block pvm d=" + std::to_string(d) + " seed=" + std::to_string(seed)};
}

std::vector<ComplexMatrix> random_isometry_family(Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
    const ComplexMatrix w = haar(d * k, seed, 40);
    std::vector<ComplexMatrix> out;
    for (Eigen::Index i = 0; i < k; ++i) out.push_back(w.block(i * d, 0, d, d).adjoint());
    return out;
}

std::vector<ComplexMatrix> twirled_family(const std::vector<ComplexMatrix> &family, std::uint64_t seed) {
    const Eigen::Index d = family.front().rows();
    const ComplexMatrix v1 = haar(d, seed, 50);
    const ComplexMatrix v2 = haar(d, seed, 51);
    std::vector<ComplexMatrix> out;
    for (const auto &a : family) out.push_back(v1 * a * v2);
    return out;
}

}  // namespace kusuoka
