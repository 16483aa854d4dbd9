#include <cmath>

#include <gtest/gtest.h>

#include "kusuoka/instances.hpp"
#include "kusuoka/pifs.hpp"

namespace kusuoka {
namespace {

// Independent oracle: evolve the state step by step with a freshly computed
// square root, without touching the Pifs class.
double naive_string_prob(const ComplexMatrix &u, const std::vector<ComplexMatrix> &povm, const ComplexMatrix &rho0,
                         const OutcomeString &s) {
    ComplexMatrix rho = rho0;
    double p = 1.0;
    for (int sym : s.symbols()) {
        const ComplexMatrix moved = u * rho * u.adjoint();
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(povm[static_cast<std::size_t>(sym)]);
        const RealVector roots = es.eigenvalues().unaryExpr([](double x) { return x <= 1e-10 ? 0.0 : std::sqrt(x); });
        const ComplexMatrix r = es.eigenvectors() * roots.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
        const ComplexMatrix next = r * moved * r;
        const double step = next.trace().real();
        if (step <= 1e-300) return 0.0;
        p *= step;
        rho = next / step;
    }
    return p;
}

TEST(OutcomeString, ParseAndFormat) {
    const auto s = OutcomeString::parse("1, 2,1", 2);
    EXPECT_EQ(s.symbols(), (std::vector<int>{0, 1, 0}));
    EXPECT_EQ(s.to_string(), "1,2,1");
    EXPECT_TRUE(OutcomeString::parse("", 3).empty());
    EXPECT_THROW(OutcomeString::parse("1,3", 2), Error);
    EXPECT_THROW(OutcomeString::parse("1,,2", 2), Error);
    EXPECT_THROW(OutcomeString::parse("a", 2), Error);
    EXPECT_THROW(OutcomeString::parse("0", 2), Error);
}

TEST(OutcomeString, IndexingAndOperations) {
    EXPECT_EQ(OutcomeString::from_index(5, 3, 2).to_string(), "2,1,2");
    EXPECT_EQ(OutcomeString::from_index(0, 2, 3).to_string(), "1,1");
    const auto s = OutcomeString::parse("1,2,3", 3);
    EXPECT_EQ(s.reversed().to_string(), "3,2,1");
    EXPECT_EQ(s.slice(1, 3).to_string(), "2,3");
    EXPECT_EQ(s.concat(OutcomeString::repeat(0, 2)).to_string(), "1,2,3,1,1");
}

TEST(Pifs, HadamardCylinders) {
    const Pifs p = hadamard_qubit_instance().pifs();
    EXPECT_NEAR(p.kusuoka_cylinder_prob(OutcomeString::parse("1,1", 2)), 0.25, 1e-15);
    EXPECT_NEAR(p.kusuoka_cylinder_prob(OutcomeString::parse("2", 2)), 0.5, 1e-15);
    EXPECT_NEAR(p.kusuoka_cylinder_prob(OutcomeString::parse("1,2,2,1,2", 2)), 1.0 / 32, 1e-15);
    EXPECT_DOUBLE_EQ(p.kusuoka_cylinder_prob(OutcomeString{}), 1.0);
}

TEST(Pifs, DiagonalQutritConstantStrings) {
    const Pifs p = diagonal_qutrit_instance().pifs();
    for (std::size_t n = 1; n <= 10; ++n) {
        EXPECT_NEAR(p.kusuoka_cylinder_prob(OutcomeString::repeat(0, n)), 2.0 / 3.0, 1e-12);
        EXPECT_NEAR(p.kusuoka_cylinder_prob(OutcomeString::repeat(1, n)), 1.0 / 3.0, 1e-12);
    }
    EXPECT_LE(p.kusuoka_cylinder_prob(OutcomeString::parse("1,2", 2)), 1e-12);
    EXPECT_LE(p.kusuoka_cylinder_prob(OutcomeString::parse("2,1,1", 2)), 1e-12);
}

TEST(Pifs, StringProbMatchesNaiveRecursion) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Instance inst = seed % 2 ? random_general_instance(3, 3, seed) : random_rank_one_instance(2, 3, seed);
        const Pifs p = inst.pifs();
        const ComplexVector v = haar_random_vector(p.dim(), seed);
        const DensityMatrix rho = DensityMatrix::pure(v);
        for (std::size_t i = 0; i < 27; ++i) {
            const auto s = OutcomeString::from_index(i, 3, 3);
            const double oracle = naive_string_prob(inst.u.matrix(), inst.povm.elements(), rho.matrix(), s);
            EXPECT_NEAR(p.string_prob(rho, s), oracle, 1e-13);
            EXPECT_NEAR(p.string_prob_recursive(rho, s), oracle, 1e-13);
        }
    }
}

TEST(Pifs, EvolveRejectsZeroProbabilityBranch) {
    const Pifs p = diagonal_qutrit_instance().pifs();
    const DensityMatrix after = p.evolve(maximally_mixed(3), 0);
    try {
        p.evolve(after, 1);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroProbabilityBranch);
    }
    EXPECT_DOUBLE_EQ(p.string_prob_recursive(maximally_mixed(3), OutcomeString::parse("1,2", 2)), 0.0);
}

TEST(Pifs, EvolvedStateIsValid) {
    const Pifs p = random_general_instance(3, 4, 9).pifs();
    const DensityMatrix next = p.evolve(maximally_mixed(3), 2);
    EXPECT_NEAR(next.matrix().trace().real(), 1.0, 1e-14);
    EXPECT_NO_THROW(DensityMatrix::from_matrix(next.matrix()));
}

TEST(Pifs, ConstructionChecks) {
    const Instance a = hadamard_qubit_instance();
    const Instance b = diagonal_qutrit_instance();
    EXPECT_THROW(Pifs(a.u, b.povm), Error);
    const Pifs p = random_general_instance(3, 3, 2).pifs();
    EXPECT_LT(p.normalization_defect(), 1e-13);
    EXPECT_LT(p.stationarity_defect(), 1e-13);
}

TEST(Pifs, CylinderTableMatchesPointwiseEvaluation) {
    const Pifs p = random_rank_one_instance(3, 4, 12).pifs();
    const auto table = p.cylinder_table(4);
    for (std::size_t n = 0; n <= 4; ++n) {
        for (std::size_t i = 0; i < table.by_length[n].size(); ++i) {
            const auto s = OutcomeString::from_index(i, n, 4);
            EXPECT_NEAR(table.at(s), p.kusuoka_cylinder_prob(s), 1e-14);
        }
    }
}

TEST(Pifs, EnumerationGuard) {
    EXPECT_EQ(enumeration_size(2, 3, 100), 15u);
    try {
        enumeration_size(10, 8, 10'000'000);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::EnumerationTooLarge);
    }
}

}  // namespace
}  // namespace kusuoka
