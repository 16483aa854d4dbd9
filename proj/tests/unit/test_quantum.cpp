#include <cmath>

#include <gtest/gtest.h>

#include "kusuoka/instances.hpp"
#include "kusuoka/quantum.hpp"

namespace kusuoka {
namespace {

ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no exception";
    return ErrorKind::Inconsistent;
}

ComplexMatrix diag2(double a, double b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

TEST(DensityMatrix, Validation) {
    EXPECT_EQ(kind_of([] { DensityMatrix::from_matrix(diag2(0.5, 0.6)); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { DensityMatrix::from_matrix(diag2(1.5, -0.5)); }), ErrorKind::NotPsd);
    ComplexMatrix skew = diag2(0.5, 0.5);
    skew(0, 1) = 0.3;
    EXPECT_EQ(kind_of([&] { DensityMatrix::from_matrix(skew); }), ErrorKind::NotHermitian);
    EXPECT_NO_THROW(DensityMatrix::from_matrix(diag2(0.25, 0.75)));
    EXPECT_EQ(kind_of([] { maximally_mixed(1); }), ErrorKind::BadDimension);
    EXPECT_LT((maximally_mixed(4).matrix() - ComplexMatrix::Identity(4, 4) / 4.0).norm(), 1e-16);
}

TEST(Unitary, HaarSamplesAreUnitaryAndReproducible) {
    for (Eigen::Index d = 1; d <= 6; ++d) {
        const auto u = haar_random_unitary(d, 77);
        EXPECT_LT((u.matrix().adjoint() * u.matrix() - ComplexMatrix::Identity(d, d)).norm(), 1e-13);
        EXPECT_EQ(u.matrix(), haar_random_unitary(d, 77).matrix());
    }
    EXPECT_NE(haar_random_unitary(3, 1).matrix(), haar_random_unitary(3, 2).matrix());
}

TEST(Unitary, HaarMomentMatchesTheory) {
    // E|U_00|^2 = 1/d for Haar measure
    const int n = 4000;
    const Eigen::Index d = 3;
    double sum = 0.0;
    for (int s = 0; s < n; ++s) sum += std::norm(haar_random_unitary(d, 100000 + s).matrix()(0, 0));
    // Var |U_00|^2 = (d-1)/(d^2 (d+1))
    const double se = std::sqrt((d - 1.0) / (d * d * (d + 1.0)) / n);
    EXPECT_NEAR(sum / n, 1.0 / d, 4 * se);
}

TEST(Povm, ValidationErrorsNameTheElement) {
    ComplexMatrix skew = diag2(0.5, 0.5);
    skew(0, 1) = 0.2;
    try {
        validate_povm({diag2(0.5, 0.5), skew});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
        EXPECT_NE(std::string(e.what()).find("element 2"), std::string::npos);
    }
    EXPECT_EQ(kind_of([] { validate_povm({diag2(1, 1), diag2(0, 0)}); }), ErrorKind::ZeroElement);
    EXPECT_EQ(kind_of([] { validate_povm({diag2(1.2, 1), diag2(-0.2, 0)}); }), ErrorKind::NotPsd);
    EXPECT_EQ(kind_of([] { validate_povm({diag2(0.5, 0.5), diag2(0.5, 0.4)}); }), ErrorKind::SumNotIdentity);
    EXPECT_EQ(kind_of([] { validate_povm({diag2(1, 0), ComplexMatrix::Identity(3, 3)}); }),
              ErrorKind::DimensionMismatch);
    EXPECT_EQ(kind_of([] { validate_povm({}); }), ErrorKind::InvalidArgument);
}

TEST(Povm, QubitPvmCarriesBothViews) {
    const Povm p = pvm_from_basis(ComplexMatrix::Identity(2, 2), {1, 1});
    EXPECT_EQ(p.kind().tag, PovmTag::TwoProjRankOne);
    ASSERT_TRUE(p.kind().rank_one.has_value());
    EXPECT_DOUBLE_EQ(p.kind().rank_one->scale, 1.0);
    ASSERT_TRUE(p.kind().two_proj.has_value());
    EXPECT_TRUE(p.kind().is_pvm);
}

TEST(Povm, TwoProjectionViewIgnoresElementOrder) {
    const ComplexMatrix basis = haar_random_unitary(3, 8).matrix();
    const ComplexMatrix large = basis.leftCols(2) * basis.leftCols(2).adjoint();
    const ComplexMatrix small = basis.col(2) * basis.col(2).adjoint();
    const Povm p = validate_povm({small, large});
    ASSERT_TRUE(p.kind().two_proj.has_value());
    EXPECT_EQ(p.kind().two_proj->large, 1u);
    EXPECT_EQ(p.kind().two_proj->small, 0u);
    EXPECT_NEAR(std::abs(p.kind().two_proj->z.dot(basis.col(2))), 1.0, 1e-12);
    EXPECT_EQ(p.kind().two_proj->theta.dim(), 2);
    EXPECT_FALSE(p.kind().rank_one.has_value());
}

TEST(Povm, Classification) {
    EXPECT_EQ(trine_instance(haar_random_unitary(2, 1)).povm.kind().tag, PovmTag::RankOnePovm);
    EXPECT_EQ(random_block_pvm_instance({2, 2}, 4).povm.kind().tag, PovmTag::Pvm);
    EXPECT_EQ(random_block_pvm_instance({1, 1, 1}, 4).povm.kind().tag, PovmTag::RankOnePovm);
    EXPECT_EQ(random_general_instance(3, 3, 4).povm.kind().tag, PovmTag::General);
    const auto ranks = random_block_pvm_instance({2, 1, 1}, 4).povm.kind().ranks;
    EXPECT_EQ(ranks, (std::vector<Eigen::Index>{2, 1, 1}));
}

TEST(Povm, RankOneVectorsAreNormalized) {
    std::vector<ComplexVector> vectors;
    for (int j = 0; j < 3; ++j) {
        ComplexVector v(2);
        v << 5.0 * std::cos(2 * M_PI * j / 3), 5.0 * std::sin(2 * M_PI * j / 3);
        vectors.push_back(v);
    }
    const Povm p = rank_one_povm(vectors);
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (const auto &e : p.elements()) sum += e;
    EXPECT_LT((sum - ComplexMatrix::Identity(2, 2)).norm(), 1e-14);
    for (const auto &e : p.elements()) EXPECT_NEAR(e.trace().real(), 2.0 / 3.0, 1e-14);

    vectors.pop_back();
    EXPECT_EQ(kind_of([&] { rank_one_povm(vectors); }), ErrorKind::SumNotIdentity);
}

}  // namespace
}  // namespace kusuoka
