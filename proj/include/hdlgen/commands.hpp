// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hdlgen {

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitInput = 2;

/// Runs every selected task and writes report.json and samples.jsonl into `out_dir`.
int cmd_run(
    const std::filesystem::path &dataset,
    const std::filesystem::path &config,
    const std::filesystem::path &out_dir,
    std::ostream &out,
    std::ostream &err);

/// Prints the ids of tasks whose `required_samples` or more baseline
/// executions never passed. Tasks with fewer samples are skipped with a
/// warning; with a dataset, ids outside it are skipped too.
int cmd_filter_hard(
    const std::filesystem::path &baseline_report,
    const std::optional<std::filesystem::path> &dataset,
    int required_samples,
    std::ostream &out,
    std::ostream &err);

/// Minimizes every output of a truth-table JSON file, checks the result
/// against the table, and prints the SOP lines followed by the module.
int cmd_minimize(
    const std::filesystem::path &table_file,
    const std::optional<std::filesystem::path> &header_file,
    const std::string &module_name,
    std::ostream &out,
    std::ostream &err);

/// Aggregate pass@k for each k and the error-rate histogram of a report.
int cmd_passk(const std::filesystem::path &report_file, const std::vector<int> &ks, std::ostream &out, std::ostream &err);

/// Writes the built-in prompt templates as <name>.txt files.
int cmd_dump_prompts(const std::filesystem::path &dir, std::ostream &out, std::ostream &err);

} // namespace hdlgen
