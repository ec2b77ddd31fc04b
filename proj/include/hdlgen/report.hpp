// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/core.hpp"
#include "hdlgen/eval.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hdlgen {

inline constexpr int kReportSchemaVersion = 1;

/// Outcome of running one task: the final search state, or the error that stopped it.
struct TaskResult {
    std::string task_id;
    int budget = 0;
    std::optional<SearchState> state;
    std::optional<std::string> error;
};

/// Per-task summary as stored in and read back from report.json.
struct TaskSummary {
    std::string task_id;
    int n = 0;
    int c = 0;
    Rational best_error_rate{1};
    bool failed = false;
};

TaskSummary summarize(const TaskResult &result);

/// The run report: schema_version, method, search settings, per-task records
/// (samples, cluster, counts) and aggregate pass@1/5/10 plus the error-rate
/// histogram. Contains no timings, so identical runs give identical bytes.
nlohmann::json build_report(
    const std::vector<TaskResult> &results, const std::string &method, const nlohmann::json &settings);

/// One JSON line per executed sample, including wall time in milliseconds.
std::string samples_jsonl(const std::vector<TaskResult> &results);

/// Reads the per-task summaries back. Throws InputError on a malformed report.
std::vector<TaskSummary> parse_report(const nlohmann::json &doc);

/// Aggregate pass@k over tasks that ran, or nullopt when some task has fewer than k samples.
std::optional<double> aggregate_if_defined(const std::vector<TaskSummary> &tasks, int k);

} // namespace hdlgen
