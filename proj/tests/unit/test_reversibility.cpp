#include <cmath>

#include <gtest/gtest.h>

#include "kusuoka/instances.hpp"
#include "kusuoka/reversibility.hpp"

namespace kusuoka {
namespace {

double direct_prob(const Pifs &p, const OutcomeString &s) {
    ComplexMatrix rho = ComplexMatrix::Identity(p.dim(), p.dim()) / static_cast<double>(p.dim());
    for (int sym : s.symbols()) {
        const ComplexMatrix &v = p.kraus(static_cast<std::size_t>(sym));
        rho = v * rho * v.adjoint();
    }
    return rho.trace().real();
}

TEST(Reversibility, TwoProjectionPvmsAreReversible) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto mode = seed % 2 ? TwoProjMode::Generic : TwoProjMode::EigenvectorInTheta;
        const Pifs p = random_two_proj_instance(2 + static_cast<Eigen::Index>(seed % 4), seed, mode).pifs();
        const auto scan = reversibility_scan(p, 8);
        EXPECT_LE(scan.max_discrepancy, 1e-12);
        EXPECT_EQ(scan.strings_checked, 510u);
        EXPECT_EQ(scan.n_max, 8u);
    }
}

TEST(Reversibility, ExplicitStringAgainstDirectProduct) {
    const Pifs p = random_two_proj_instance(4, 3, TwoProjMode::Generic).pifs();
    const OutcomeString s({1, 0, 1});
    const OutcomeString t({1, 1, 0});
    EXPECT_NEAR(p.kusuoka_cylinder_prob(s), direct_prob(p, s), 1e-14);
    EXPECT_NEAR(direct_prob(p, t), direct_prob(p, t.reversed()), 1e-14);
}

TEST(Reversibility, GenericRankOneIsNotReversible) {
    const Pifs p = random_rank_one_instance(3, 3, 5).pifs();
    const auto scan = reversibility_scan(p, 4);
    EXPECT_GT(scan.max_discrepancy, 1e-6);
    const double oracle = std::abs(direct_prob(p, scan.worst_string) - direct_prob(p, scan.worst_string.reversed()));
    EXPECT_NEAR(scan.max_discrepancy, oracle, 1e-14);
    EXPECT_NE(scan.worst_string, scan.worst_string.reversed());
}

TEST(Reversibility, PalindromesHaveNoDiscrepancy) {
    const Pifs p = random_general_instance(2, 3, 9).pifs();
    for (const char *text : {"1", "1,2,1", "1,2,3,2,1", "3,1,1,3"}) {
        const auto s = OutcomeString::parse(text, 3);
        EXPECT_EQ(s, s.reversed());
    }
    const auto scan = reversibility_scan(p, 1);
    EXPECT_DOUBLE_EQ(scan.max_discrepancy, 0.0);
}

TEST(Reversibility, ReversalIsAnInvolutionOnTheScan) {
    // Reversal preserves the marginal of the last n symbols of a length-(n+1) string.
    const Pifs p = random_two_proj_instance(3, 11, TwoProjMode::Generic).pifs();
    for (std::size_t idx = 0; idx < 8; ++idx) {
        const auto s = OutcomeString::from_index(idx, 3, 2);
        double shifted = 0.0;
        for (int a = 0; a < 2; ++a) shifted += direct_prob(p, OutcomeString({a}).concat(s));
        EXPECT_NEAR(shifted, direct_prob(p, s), 1e-14);
        EXPECT_NEAR(direct_prob(p, s.reversed()), shifted, 1e-13);
    }
}

TEST(FactIdentities, HoldForTwoProjectionPvms) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const Pifs p = random_two_proj_instance(2 + static_cast<Eigen::Index>(seed % 3), seed, TwoProjMode::Generic).pifs();
        const auto report = fact_identities_check(p, 20);
        EXPECT_TRUE(report.passed);
        EXPECT_LE(report.first_visit_residual, 1e-10);
        EXPECT_LE(report.factorization_residual, 1e-10);
        EXPECT_EQ(report.m_max, 20u);
        EXPECT_GT(report.identities_checked, 21u);
    }
}

TEST(FactIdentities, FirstVisitIndependentOracle) {
    const Instance inst = random_two_proj_instance(3, 2, TwoProjMode::Generic);
    const Pifs p = inst.pifs();
    const auto &view = *inst.povm.kind().two_proj;
    const ComplexMatrix pz = view.z * view.z.adjoint();
    const ComplexMatrix theta = ComplexMatrix::Identity(3, 3) - pz;
    const ComplexMatrix &u = inst.u.matrix();
    // P(L^m S) = tr(P_z U (P_theta U)^m (P_theta U)^{*m} U^* P_z) / d
    ComplexMatrix a = ComplexMatrix::Identity(3, 3);
    for (int m = 0; m < 6; ++m) {
        const double oracle = (pz * u * a * a.adjoint() * u.adjoint() * pz).trace().real() / 3.0;
        OutcomeString s = OutcomeString::repeat(static_cast<int>(view.large), static_cast<std::size_t>(m))
                              .concat(OutcomeString::repeat(static_cast<int>(view.small), 1));
        EXPECT_NEAR(direct_prob(p, s), oracle, 1e-14);
        a = a * theta * u;
    }
}

TEST(FactIdentities, RejectsOtherPovms) {
    try {
        fact_identities_check(random_rank_one_instance(3, 4, 1).pifs(), 5);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::WrongPovmKind);
    }
}

TEST(Reversibility, EnumerationGuard) {
    const Pifs p = random_rank_one_instance(2, 5, 1).pifs();
    try {
        reversibility_scan(p, 20, 1000);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::EnumerationTooLarge);
    }
}

}  // namespace
}  // namespace kusuoka
