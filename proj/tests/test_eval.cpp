// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/errors.hpp"
#include "hdlgen/eval.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hdlgen;
using hdlgen::testing::brute_force_pass_at_k;

TEST(PassAtK, SpotValues)
{
    EXPECT_DOUBLE_EQ(pass_at_k(10, 10, 1), 1.0);
    EXPECT_DOUBLE_EQ(pass_at_k(10, 0, 5), 0.0);
    EXPECT_NEAR(pass_at_k(10, 1, 1), 0.1, 1e-15);
    EXPECT_EQ(pass_at_k_exact(10, 1, 1), Rational(1, 10));
}

TEST(PassAtK, MatchesSubsetEnumerationForTenThreeFive)
{
    Rational oracle = brute_force_pass_at_k(10, 3, 5);
    EXPECT_EQ(oracle, Rational(1) - Rational(21, 252));
    EXPECT_EQ(pass_at_k_exact(10, 3, 5), oracle);
    EXPECT_NEAR(pass_at_k(10, 3, 5), oracle.to_double(), 1e-12);
}

TEST(PassAtK, RejectsOutOfRangeArguments)
{
    EXPECT_THROW(pass_at_k(10, 11, 1), ContractViolation);
    EXPECT_THROW(pass_at_k(10, -1, 1), ContractViolation);
    EXPECT_THROW(pass_at_k(10, 1, 0), ContractViolation);
    EXPECT_THROW(pass_at_k(10, 1, 11), ContractViolation);
}

TEST(PassAtK, MonotoneInCAndK)
{
    for (int n = 1; n <= 12; ++n)
        for (int c = 0; c <= n; ++c)
            for (int k = 1; k <= n; ++k) {
                if (c < n) {
                    EXPECT_LE(pass_at_k_exact(n, c, k), pass_at_k_exact(n, c + 1, k));
                }
                if (k < n) {
                    EXPECT_LE(pass_at_k_exact(n, c, k), pass_at_k_exact(n, c, k + 1));
                }
            }
}

TEST(PassAtK, FullKIsIndicatorOfAnyPass)
{
    for (int n = 1; n <= 12; ++n)
        for (int c = 0; c <= n; ++c)
            EXPECT_EQ(pass_at_k_exact(n, c, n), Rational(c > 0 ? 1 : 0));
}

TEST(Aggregate, MeanOverTasks)
{
    EXPECT_DOUBLE_EQ(aggregate_pass_at_k({{10, 10}, {10, 0}}, 1), 0.5);
    EXPECT_DOUBLE_EQ(aggregate_pass_at_k({{10, 3}}, 5), pass_at_k(10, 3, 5));
    EXPECT_DOUBLE_EQ(aggregate_pass_at_k({{10, 10}, {5, 5}}, 5), 1.0);
    EXPECT_EQ(aggregate_pass_at_k_exact({{10, 10}, {10, 0}}, 1), Rational(1, 2));
    EXPECT_THROW(aggregate_pass_at_k({}, 1), ContractViolation);
}

TEST(Histogram, HalfOpenBucketsWithClosedTop)
{
    using A = std::array<int, 5>;
    EXPECT_EQ(error_rate_histogram({Rational(1, 10), Rational(3, 10), Rational(9, 10)}), (A{1, 1, 0, 0, 1}));
    EXPECT_EQ(error_rate_histogram({Rational(1, 5)}), (A{0, 1, 0, 0, 0}));
    EXPECT_EQ(error_rate_histogram({Rational(1)}), (A{0, 0, 0, 0, 1}));
    EXPECT_EQ(error_rate_histogram({Rational(0)}), (A{1, 0, 0, 0, 0}));
    EXPECT_EQ(error_rate_histogram({Rational(4, 5), Rational(3, 5), Rational(2, 5)}), (A{0, 0, 1, 1, 1}));
    EXPECT_THROW(error_rate_histogram({Rational(6, 5)}), ContractViolation);
}

TEST(Histogram, CountsSumToTaskCount)
{
    std::vector<Rational> rates;
    for (int i = 0; i <= 100; ++i)
        rates.emplace_back(i, 100);
    auto h = error_rate_histogram(rates);
    EXPECT_EQ(h[0] + h[1] + h[2] + h[3] + h[4], 101);
    EXPECT_EQ(h[0], 20);
    EXPECT_EQ(h[4], 21);
}

TEST(BestErrorRate, UsesBestSample)
{
    std::vector<ExecutedSample> executed(3);
    executed[0].outcome = make_outcome(3, 10);
    executed[1].outcome = make_outcome(7, 10);
    executed[2].outcome = compile_error_outcome();
    EXPECT_EQ(best_error_rate(executed), Rational(3, 10));
    EXPECT_EQ(best_error_rate({}), Rational(1));
}
