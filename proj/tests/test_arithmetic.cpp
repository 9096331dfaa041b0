#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "nblab/arithmetic.hpp"
#include "nblab/errors.hpp"
#include "oracles.hpp"

using namespace nblab;

TEST(MobiusSieve, MatchesTrialDivision) {
    const MobiusTable table = mobius_sieve(20'000);
    ASSERT_EQ(table.n_max(), 20'000);
    EXPECT_EQ(table.values()[0], 0);
    for (std::int64_t n = 1; n <= table.n_max(); ++n) ASSERT_EQ(table[n], oracle::trial_division_mu(n)) << n;
}

TEST(MobiusSieve, SmallValues) {
    const MobiusTable table = mobius_sieve(12);
    const int want[] = {0, 1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0};
    for (int n = 1; n <= 12; ++n) EXPECT_EQ(table[n], want[n]) << n;
}

TEST(MobiusSieve, Mertens) {
    const MobiusTable table = mobius_sieve(10'000);
    EXPECT_EQ(table.mertens(1), 1);
    EXPECT_EQ(table.mertens(100), 1);
    EXPECT_EQ(table.mertens(1000), 2);
    EXPECT_EQ(table.mertens(10'000), oracle::kMertens10000);
}

TEST(MobiusSieve, MultiplicativeOnCoprimePairs) {
    const MobiusTable table = mobius_sieve(1'000'000);
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> pick(1, 1000);
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t m = pick(rng), n = pick(rng);
        if (std::gcd(m, n) != 1) continue;
        ASSERT_EQ(table[m * n], table[m] * table[n]) << m << " " << n;
    }
}

TEST(MobiusSieve, Errors) {
    EXPECT_THROW(mobius_sieve(0), RangeError);
    EXPECT_THROW(mobius_sieve(-5), RangeError);
    EXPECT_THROW(mobius_sieve(1001, 1000), CapacityError);
    EXPECT_NO_THROW(mobius_sieve(1000, 1000));
    EXPECT_EQ(mobius_sieve(1).n_max(), 1);
}

TEST(MuPartialSum, ExactSmallSum) {
    const MobiusTable table = mobius_sieve(10);
    // 1 - 1/2 - 1/3 - 1/5 + 1/6
    EXPECT_NEAR(mu_partial_sum(table, 1.0, 6).real(), 4.0 / 30.0, 1e-15);
    EXPECT_EQ(mu_partial_sum(table, 1.0, 6).imag(), 0.0);
}

TEST(MuPartialSum, OracleValue) {
    const MobiusTable table = mobius_sieve(100);
    EXPECT_NEAR(mu_partial_sum(table, 0.75, 100).real(), oracle::kMobiusSum100Pow075, 1e-14);
}

TEST(MuPartialSum, ApproachesReciprocalZeta) {
    const MobiusTable table = mobius_sieve(100'000);
    const Complex s(2.0, 3.0);
    // The tail is at most sum_{n > N} n^{-2} < 1/N.
    EXPECT_LT(std::abs(mu_partial_sum(table, s, 100'000) - 1.0 / zeta(s)), 1e-5);
}

TEST(MuPartialSum, CountBeyondTable) {
    const MobiusTable table = mobius_sieve(50);
    EXPECT_THROW(mu_partial_sum(table, 2.0, 51), RangeError);
    EXPECT_EQ(mu_partial_sum(table, 2.0, 0), Complex(0.0, 0.0));
}
