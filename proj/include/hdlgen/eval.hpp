// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/core.hpp"
#include "hdlgen/rational.hpp"

#include <array>
#include <vector>

namespace hdlgen {

/// Unbiased pass@k estimate 1 - C(n-c, k) / C(n, k) via the stable product
/// 1 - prod_{i=n-c+1..n} (1 - k/i). Throws ContractViolation unless
/// 0 <= c <= n and 1 <= k <= n.
double pass_at_k(int n, int c, int k);

/// Same estimate as an exact fraction.
Rational pass_at_k_exact(int n, int c, int k);

struct TaskCounts {
    int n = 0;
    int c = 0;
};

/// Mean pass@k over tasks. Throws ContractViolation on an empty set.
double aggregate_pass_at_k(const std::vector<TaskCounts> &tasks, int k);
Rational aggregate_pass_at_k_exact(const std::vector<TaskCounts> &tasks, int k);

inline constexpr int kHistogramBuckets = 5;

/// Buckets [0,0.2), [0.2,0.4), [0.4,0.6), [0.6,0.8), [0.8,1.0].
/// Throws ContractViolation for a rate outside [0, 1].
std::array<int, kHistogramBuckets> error_rate_histogram(const std::vector<Rational> &best_error_rates);

/// 1 - max p over the executed samples; 1 when nothing ran.
Rational best_error_rate(const std::vector<ExecutedSample> &executed);

} // namespace hdlgen
