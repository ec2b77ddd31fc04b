// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/core.hpp"

#include <filesystem>
#include <vector>

namespace hdlgen {

/// Loads tasks from either
///  - a directory with one sub-directory per task holding spec.txt,
///    testbench.v and (optionally) header.v, in name order, or
///  - a line-delimited JSON file with task_id, prompt, testbench and
///    module_header fields (plus an optional split).
/// Throws InputError on unreadable or malformed input and duplicate ids.
std::vector<Task> load_dataset(const std::filesystem::path &path);

/// Keeps the listed ids in dataset order. Throws InputError for an unknown id.
std::vector<Task> filter_tasks(std::vector<Task> tasks, const std::vector<std::string> &ids);

} // namespace hdlgen
