// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/core.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdlgen {

/// Runs one candidate against its task's testbench.
class Simulator {
public:
    virtual ~Simulator() = default;

    /// `sample_key` names the sample's scratch directory. Candidate failures are
    /// outcomes; only harness trouble throws (InfrastructureError).
    virtual TestOutcome run(const CodeSample &sample, const Task &task, std::string_view sample_key) = 0;
};

/// Regexes with named groups `mismatches` and `total`; the last matching line wins.
class PassCountProtocol {
public:
    PassCountProtocol();
    explicit PassCountProtocol(std::vector<std::string> patterns);

    static const std::vector<std::string> &default_patterns();

    /// (mismatches, total) from the simulator output, if any line matches.
    std::optional<std::pair<long, long>> parse(std::string_view output) const;

    /// Outcome for a run that exited with `exit_code` and printed `output`.
    TestOutcome outcome(std::string_view output, int exit_code) const;

    const std::vector<std::string> &patterns() const { return patterns_; }

private:
    std::vector<std::string> patterns_;
};

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
};

/// Runs argv[0] (looked up on PATH) in `cwd` with stdout and stderr sent to
/// `output_file`; kills the process group after `timeout`.
/// Throws InfrastructureError when the process cannot be started.
ProcessResult run_process(
    const std::vector<std::string> &argv,
    const std::filesystem::path &cwd,
    const std::filesystem::path &output_file,
    std::chrono::milliseconds timeout);

/// Absolute path of `program` if it is an executable file or found on PATH.
std::optional<std::filesystem::path> find_executable(const std::string &program);

struct IverilogConfig {
    std::string compiler = "iverilog";
    std::string runtime = "vvp";
    std::vector<std::string> extra_flags{"-g2012"};
    std::chrono::seconds timeout{60};
    std::vector<std::string> protocol_patterns = PassCountProtocol::default_patterns();
    std::filesystem::path scratch_root = "scratch";
};

/// Icarus Verilog harness. Scratch layout: <scratch_root>/<task>/<sample>/
/// with candidate.v, tb.v and sim.out.
class IverilogSimulator : public Simulator {
public:
    /// Throws InfrastructureError when either executable is missing.
    explicit IverilogSimulator(IverilogConfig config);

    TestOutcome run(const CodeSample &sample, const Task &task, std::string_view sample_key) override;

private:
    IverilogConfig config_;
    std::filesystem::path compiler_;
    std::filesystem::path runtime_;
    PassCountProtocol protocol_;
};

/// Substring-keyed scripted outcomes.
struct MockRule {
    std::string key;
    TestOutcome outcome;
};

/// First rule whose key occurs in the candidate wins (task-specific rules
/// before shared ones); no match means CompileError.
class MockSimulator : public Simulator {
public:
    MockSimulator(std::vector<MockRule> shared, std::map<std::string, std::vector<MockRule>> per_task = {});

    TestOutcome run(const CodeSample &sample, const Task &task, std::string_view sample_key) override;

    TestOutcome simulate(std::string_view code, const std::string &task_id = {}) const;

private:
    std::vector<MockRule> shared_;
    std::map<std::string, std::vector<MockRule>> per_task_;
};

/// `[rule...]` or `{"default": [rule...], "tasks": {"id": [rule...]}}` where a rule is
/// `{"key": s, "passed": m, "total": n}` or `{"key": s, "status": "compile_error"|"timeout"}`.
/// Throws InputError.
MockSimulator parse_mock_simulator(const nlohmann::json &doc);
MockSimulator load_mock_simulator(const std::filesystem::path &path);

} // namespace hdlgen
