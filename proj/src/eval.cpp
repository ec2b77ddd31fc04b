// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/eval.hpp"

#include "hdlgen/errors.hpp"

#include <algorithm>
#include <string>

namespace hdlgen {
namespace {

void check_args(int n, int c, int k)
{
    if (n < 1 || c < 0 || c > n || k < 1 || k > n)
        throw ContractViolation(
            "pass@k needs 0 <= c <= n and 1 <= k <= n (n=" + std::to_string(n) + ", c=" + std::to_string(c)
            + ", k=" + std::to_string(k) + ")");
}

} // namespace

double pass_at_k(int n, int c, int k)
{
    check_args(n, c, k);
    if (c == 0)
        return 0.0;
    if (n - c < k)
        return 1.0;
    double keep = 1.0;
    for (int i = n - c + 1; i <= n; ++i)
        keep *= 1.0 - static_cast<double>(k) / i;
    return 1.0 - keep;
}

Rational pass_at_k_exact(int n, int c, int k)
{
    check_args(n, c, k);
    if (c == 0)
        return Rational(0);
    if (n - c < k)
        return Rational(1);
    Rational keep(1);
    for (int i = n - c + 1; i <= n; ++i)
        keep = keep * Rational(i - k, i);
    return Rational(1) - keep;
}

double aggregate_pass_at_k(const std::vector<TaskCounts> &tasks, int k)
{
    if (tasks.empty())
        throw ContractViolation("pass@k over an empty task set");
    double sum = 0.0;
    for (const auto &t : tasks)
        sum += pass_at_k(t.n, t.c, k);
    return sum / static_cast<double>(tasks.size());
}

Rational aggregate_pass_at_k_exact(const std::vector<TaskCounts> &tasks, int k)
{
    if (tasks.empty())
        throw ContractViolation("pass@k over an empty task set");
    Rational sum(0);
    for (const auto &t : tasks)
        sum += pass_at_k_exact(t.n, t.c, k);
    return sum / Rational(static_cast<std::int64_t>(tasks.size()));
}

std::array<int, kHistogramBuckets> error_rate_histogram(const std::vector<Rational> &best_error_rates)
{
    std::array<int, kHistogramBuckets> counts{};
    for (const auto &rate : best_error_rates) {
        if (rate < Rational(0) || rate > Rational(1))
            throw ContractViolation("error rate " + rate.to_string() + " outside [0, 1]");
        // floor(rate * 5) on the exact fraction
        Rational scaled = rate * Rational(kHistogramBuckets);
        auto bucket = static_cast<int>(scaled.num() / scaled.den());
        counts[static_cast<std::size_t>(std::min(bucket, kHistogramBuckets - 1))] += 1;
    }
    return counts;
}

Rational best_error_rate(const std::vector<ExecutedSample> &executed)
{
    Rational best(0);
    for (const auto &e : executed)
        best = std::max(best, e.outcome.pass_rate());
    return Rational(1) - best;
}

} // namespace hdlgen
