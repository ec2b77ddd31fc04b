// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/backend.hpp"
#include "hdlgen/core.hpp"
#include "hdlgen/prompts.hpp"
#include "hdlgen/sim.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hdlgen {

enum class BackendKind { Scripted, Remote };
enum class SimulatorKind { Iverilog, Mock };
enum class Method { Pipeline, Baseline };

struct BackendSettings {
    BackendKind kind = BackendKind::Scripted;
    std::filesystem::path script;
    RemoteConfig remote;
    std::string api_key_env = "OPENAI_API_KEY";
    GenerationSettings generation;
    std::optional<std::filesystem::path> prompt_dir;
};

struct SimSettings {
    SimulatorKind kind = SimulatorKind::Iverilog;
    IverilogConfig iverilog;
    std::filesystem::path mock;
};

struct RunSettings {
    int workers = 1;
    std::uint64_t seed = 0;
    Method method = Method::Pipeline;
    int baseline_executions = 10;
    /// Empty means every task in the dataset.
    std::vector<std::string> tasks;
};

struct RunConfig {
    BackendSettings backend;
    BudgetConfig search;
    SimSettings sim;
    RunSettings run;
};

/// Parses the JSON config; relative paths resolve against `base_dir`.
/// Missing keys keep their defaults. Throws InputError.
RunConfig parse_config(const nlohmann::json &doc, const std::filesystem::path &base_dir = {});
RunConfig load_config(const std::filesystem::path &path);

/// Echo of the search settings for reports.
nlohmann::json search_config_json(const BudgetConfig &config);

} // namespace hdlgen
