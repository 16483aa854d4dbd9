#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "kusuoka/rng.hpp"

namespace kusuoka {
namespace {

TEST(CounterRng, DrawsArePureFunctionsOfSeedStreamCounter) {
    CounterRng a(42, 3), b(42, 3);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
    EXPECT_EQ(a.counter(), 100u);
}

TEST(CounterRng, StreamsAndSeedsDiffer) {
    CounterRng a(42, 0), b(42, 1), c(43, 0);
    std::set<std::uint64_t> seen{a.next_u64(), b.next_u64(), c.next_u64()};
    EXPECT_EQ(seen.size(), 3u);
}

TEST(CounterRng, UniformIsInHalfOpenUnitInterval) {
    CounterRng rng(7, 0);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform_open_closed();
        ASSERT_GT(u, 0.0);
        ASSERT_LE(u, 1.0);
        sum += u;
    }
    // mean of U(0,1]: 1/2 with standard error 1/sqrt(12 n)
    EXPECT_NEAR(sum / n, 0.5, 4.0 / std::sqrt(12.0 * n));
}

TEST(CounterRng, NormalMoments) {
    CounterRng rng(11, 5);
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        s1 += x;
        s2 += x * x;
    }
    EXPECT_NEAR(s1 / n, 0.0, 4.0 / std::sqrt(n));
    EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
}

}  // namespace
}  // namespace kusuoka
