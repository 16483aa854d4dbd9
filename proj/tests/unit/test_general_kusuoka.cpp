#include <cmath>

#include <gtest/gtest.h>

#include "kusuoka/general_kusuoka.hpp"
#include "kusuoka/instances.hpp"

namespace kusuoka {
namespace {

ComplexMatrix random_density(Eigen::Index d, std::uint64_t seed) {
    const ComplexMatrix g = haar_random_unitary(d, seed).matrix();
    ComplexMatrix rho = ComplexMatrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) rho += static_cast<double>(i + 1) * g.col(i) * g.col(i).adjoint();
    return rho / rho.trace().real();
}

TEST(OperatorFamily, TransferMatrixActsOnColumnMajorVec) {
    const auto family = OperatorFamily::from_operators(random_isometry_family(3, 2, 4));
    const ComplexMatrix t = family.transfer_matrix();
    ASSERT_EQ(t.rows(), 9);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const ComplexMatrix rho = random_density(3, seed);
        const ComplexVector vec = Eigen::Map<const ComplexVector>(rho.data(), 9);
        const ComplexVector image = t * vec;
        const ComplexMatrix expected = family.apply_dual(rho);
        EXPECT_LT((Eigen::Map<const ComplexMatrix>(image.data(), 3, 3) - expected).norm(), 1e-13);
    }
}

TEST(OperatorFamily, DualMapPreservesTrace) {
    const auto family = OperatorFamily::from_operators(random_isometry_family(4, 3, 1));
    const ComplexMatrix rho = random_density(4, 9);
    EXPECT_NEAR(family.apply_dual(rho).trace().real(), 1.0, 1e-13);
}

TEST(OperatorFamily, Validation) {
    try {
        OperatorFamily::from_operators({ComplexMatrix::Identity(2, 2) * 0.9});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::SumNotIdentity);
    }
    try {
        OperatorFamily::from_operators({ComplexMatrix::Identity(2, 2) * std::sqrt(0.5), ComplexMatrix::Identity(3, 3)});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
    }
}

TEST(StationaryDensity, PifsFamilyHasMaximallyMixedFixedPoint) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto family = OperatorFamily::from_pifs(random_general_instance(3, 3, seed).pifs());
        const auto sd = stationary_density(family);
        EXPECT_LT((sd.rho.matrix() - ComplexMatrix::Identity(3, 3) / 3.0).norm(), 1e-10);
        EXPECT_FALSE(sd.non_unique_warning);
        EXPECT_EQ(sd.fixed_space_dim, 1);
        EXPECT_LT(sd.residual, 1e-10);
    }
}

TEST(StationaryDensity, SingleUnitaryConjugation) {
    const ComplexMatrix u = haar_random_unitary(3, 5).matrix();
    const auto family = OperatorFamily::from_operators({u});
    const auto sd = stationary_density(family);
    // U* rho U = rho has a solution space of dimension 3 (the commutant of a generic U)
    EXPECT_TRUE(sd.non_unique_warning);
    EXPECT_EQ(sd.fixed_space_dim, 3);
    EXPECT_LT((sd.rho.matrix() - ComplexMatrix::Identity(3, 3) / 3.0).norm(), 1e-10);
}

TEST(StationaryDensity, DiagonalFamilyIsNotUnique) {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(2, 2);
    a(0, 0) = std::sqrt(0.3);
    a(1, 1) = std::sqrt(0.6);
    b(0, 0) = std::sqrt(0.7);
    b(1, 1) = std::sqrt(0.4);
    const auto family = OperatorFamily::from_operators({a, b});
    const auto sd = stationary_density(family);
    EXPECT_TRUE(sd.non_unique_warning);
    EXPECT_GE(sd.fixed_space_dim, 2);
    EXPECT_LT((family.apply_dual(sd.rho.matrix()) - sd.rho.matrix()).norm(), 1e-10);
    EXPECT_FALSE(make_kusuoka_system(family).irreducible);
}

TEST(StationaryDensity, IsometryFamilyHasPositiveDefiniteFixedPoint) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const auto family = OperatorFamily::from_operators(twirled_family(random_isometry_family(3, 2, seed), seed));
        const auto sd = stationary_density(family);
        const ComplexMatrix &rho = sd.rho.matrix();
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
        EXPECT_LT((rho - rho.adjoint()).norm(), 1e-13);
        EXPECT_LT((family.apply_dual(rho) - rho).norm(), 1e-10);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
        EXPECT_GT(es.eigenvalues().minCoeff(), 1e-10);
        EXPECT_NEAR(sd.min_eigenvalue, es.eigenvalues().minCoeff(), 1e-12);
    }
}

TEST(StationaryDensity, LargeDimensionUsesPowerIteration) {
    const auto family = OperatorFamily::from_operators(random_isometry_family(9, 3, 2));
    const auto sd = stationary_density(family);
    EXPECT_TRUE(sd.used_power_iteration);
    EXPECT_LT((family.apply_dual(sd.rho.matrix()) - sd.rho.matrix()).norm(), 1e-9);
    const auto small = stationary_density(OperatorFamily::from_operators(random_isometry_family(3, 3, 2)));
    EXPECT_FALSE(small.used_power_iteration);
}

TEST(KusuokaSystem, MeasureIsConsistent) {
    const auto family = OperatorFamily::from_operators(random_isometry_family(3, 3, 7));
    const auto sys = make_kusuoka_system(family);
    EXPECT_TRUE(sys.irreducible);
    EXPECT_NEAR(kusuoka_prob(sys, OutcomeString{}), 1.0, 1e-12);
    for (std::size_t n = 1; n <= 4; ++n) {
        double total = 0.0;
        for (std::size_t idx = 0; idx < static_cast<std::size_t>(std::pow(3, n)); ++idx) {
            const auto s = OutcomeString::from_index(idx, n, 3);
            double children = 0.0;
            for (int a = 0; a < 3; ++a) children += kusuoka_prob(sys, s.concat(OutcomeString({a})));
            EXPECT_NEAR(children, kusuoka_prob(sys, s), 1e-13);
            double parents = 0.0;
            for (int a = 0; a < 3; ++a) parents += kusuoka_prob(sys, OutcomeString({a}).concat(s));
            EXPECT_NEAR(parents, kusuoka_prob(sys, s), 1e-10);
            total += kusuoka_prob(sys, s);
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(KusuokaSystem, AgreesWithPifsCylinders) {
    const Pifs p = random_rank_one_instance(2, 3, 3).pifs();
    const auto sys = make_kusuoka_system(OperatorFamily::from_pifs(p));
    for (std::size_t n = 1; n <= 6; ++n) {
        for (std::size_t idx = 0; idx < static_cast<std::size_t>(std::pow(3, n)); ++idx) {
            const auto s = OutcomeString::from_index(idx, n, 3);
            EXPECT_NEAR(kusuoka_prob(sys, s), p.kusuoka_cylinder_prob(s), 1e-13);
        }
    }
}

TEST(KusuokaSystem, IdentityFamily) {
    const auto sys = make_kusuoka_system(OperatorFamily::from_operators({ComplexMatrix::Identity(2, 2)}));
    EXPECT_NEAR(kusuoka_prob(sys, OutcomeString({0, 0, 0})), 1.0, 1e-14);
    EXPECT_THROW(kusuoka_prob(sys, OutcomeString({1})), Error);
}

}  // namespace
}  // namespace kusuoka
