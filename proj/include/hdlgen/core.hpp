// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/rational.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdlgen {

enum class DatasetSplit { Human, Machine };

/// One benchmark problem.
struct Task {
    std::string id;
    std::string spec_text;
    std::string testbench_src;
    std::string module_header;
    DatasetSplit split = DatasetSplit::Human;

    /// Throws ContractViolation when id or testbench is empty.
    void validate() const;
};

/// Circuit family a task is routed to. The classifier only ever yields
/// Combinational or Sequential; General is set by escalation.
enum class CircuitKind { Combinational, Sequential, General };

enum class Procedure { Comb, Sequ, Behav, Baseline };

enum class TestStatus { Pass, PartialFail, CompileError, SimTimeout };

enum class SearchMode { Normal, ShortCut, FailSafe, Done };

std::string_view to_string(DatasetSplit split);
std::string_view to_string(CircuitKind kind);
std::string_view to_string(Procedure procedure);
std::string_view to_string(TestStatus status);
std::string_view to_string(SearchMode mode);

DatasetSplit parse_split(std::string_view text);

/// Numbered input/output relationship statements extracted from a spec,
/// together with the pass rates of every sample generated from them.
struct InformationList {
    std::string id;
    std::vector<std::string> items;
    int origin_iteration = 1;
    std::vector<Rational> pass_rate_history;

    /// Mean of the history; 0 when nothing has been recorded.
    Rational score() const;

    /// Items rendered back as a "1. ..." list for prompts.
    std::string render() const;
};

/// Builds a list whose id is a content hash of its items.
InformationList make_information_list(std::vector<std::string> items, int origin_iteration);

/// Appends `pass_rate` to the history. Throws ContractViolation outside [0, 1].
InformationList update_score(InformationList list, const Rational &pass_rate);

struct CodeSample {
    std::string verilog_src;
    Procedure procedure = Procedure::Baseline;
    std::optional<std::string> info_list_id;
    int iteration = 1;
};

/// Result of one testbench execution: m of n stimulus/response pairs matched.
struct TestOutcome {
    TestStatus status = TestStatus::CompileError;
    int passed = 0;
    int total = 1;

    Rational pass_rate() const { return Rational(passed, total); }
};

/// Pass when m == n, PartialFail otherwise. Throws ContractViolation unless 0 <= m <= n, n >= 1.
TestOutcome make_outcome(int passed, int total);
TestOutcome compile_error_outcome();
TestOutcome timeout_outcome();

struct BudgetConfig {
    std::vector<int> samples_per_iteration{7, 2, 1};
    /// Entry 0 is unused; selection for iteration s takes the top entry s-1.
    std::vector<int> top_candidates{1, 2, 1};
    Rational shortcut_threshold{95, 100};
    int max_format_errors = 10;
    bool stop_on_pass = false;
    /// Format errors tolerated after entering Fail-safe before the task is abandoned.
    int failsafe_format_error_limit = 10;

    int max_iterations() const { return static_cast<int>(samples_per_iteration.size()); }
    int total_budget() const;

    void validate() const;
};

struct ExecutedSample {
    CodeSample sample;
    TestOutcome outcome;
    SearchMode mode = SearchMode::Normal;
    double wall_seconds = 0.0;
};

struct SearchState {
    std::string task_id;
    int iteration = 1;
    SearchMode mode = SearchMode::Normal;
    int format_errors = 0;
    int remaining_budget = 0;
    std::vector<InformationList> cluster;
    bool solved = false;
    /// Set when the task stopped with budget left because Fail-safe itself kept failing.
    bool abandoned = false;
    std::optional<CircuitKind> circuit_kind;
    std::vector<ExecutedSample> executed;

    const InformationList *find_list(std::string_view id) const;
    InformationList *find_list(std::string_view id);
};

} // namespace hdlgen
