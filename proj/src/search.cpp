// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/search.hpp"

#include "hdlgen/behav.hpp"
#include "hdlgen/comb.hpp"
#include "hdlgen/errors.hpp"
#include "hdlgen/extraction.hpp"
#include "hdlgen/sequ.hpp"
#include "hdlgen/verilog_text.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

namespace hdlgen {
namespace {

std::string sample_key(std::size_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "sample_%02zu", index);
    return buf;
}

/// Iteration (1-based) and position within it for the next execution.
std::pair<int, int> slot_of(const BudgetConfig &config, int consumed)
{
    int s = 1;
    for (int n : config.samples_per_iteration) {
        if (consumed < n)
            return {s, consumed};
        consumed -= n;
        ++s;
    }
    return {config.max_iterations(), consumed};
}

/// Records `p` against `list`, inserting it into the cluster or merging with
/// an identical earlier extraction.
void record_score(SearchState &state, const InformationList &list, const Rational &p)
{
    if (auto *existing = state.find_list(list.id)) {
        *existing = update_score(std::move(*existing), p);
        return;
    }
    state.cluster.push_back(update_score(list, p));
}

/// Code region of a direct-generation reply, completed with the header when
/// the reply only holds a module body.
std::string baseline_code(std::string_view reply, const std::string &header)
{
    auto regions = verilog::extract_code_blocks(reply);
    for (const auto &r : regions)
        if (verilog::has_balanced_module(r))
            return r;
    std::string body = regions.empty() ? std::string(reply) : regions.front();
    if (header.empty() || verilog::contains_keyword(body, "module"))
        return body;
    std::string code = header + "\n" + body + "\n";
    if (!verilog::contains_keyword(body, "endmodule"))
        code += "endmodule\n";
    return code;
}

} // namespace

LlmProcedures::LlmProcedures(const LlmSession &session, Classifier *shared_cache)
    : session_(session)
    , cache_(shared_cache ? shared_cache : &own_cache_)
{}

CircuitKind LlmProcedures::classify(const Task &task)
{
    return cache_->classify(task, session_);
}

InformationList LlmProcedures::extract(const Task &task, CircuitKind kind, int iteration)
{
    return extract_info_list(task, kind, session_, iteration);
}

std::string LlmProcedures::generate(Procedure procedure, const InformationList &list, const Task &task)
{
    switch (procedure) {
    case Procedure::Comb:
        return run_comb(list, task, session_);
    case Procedure::Sequ:
        return run_sequ(list, task, session_);
    case Procedure::Behav:
        return run_behav(list, task, session_);
    case Procedure::Baseline:
        break;
    }
    throw ContractViolation("the baseline does not use an information list");
}

Procedure type_specific_procedure(CircuitKind kind)
{
    switch (kind) {
    case CircuitKind::Combinational:
        return Procedure::Comb;
    case CircuitKind::Sequential:
        return Procedure::Sequ;
    case CircuitKind::General:
        break;
    }
    return Procedure::Behav;
}

std::vector<InformationList> select_top(const std::vector<InformationList> &cluster, int c)
{
    if (c < 1)
        throw ContractViolation("select_top needs c >= 1");
    std::vector<InformationList> ranked = cluster;
    std::sort(ranked.begin(), ranked.end(), [](const InformationList &a, const InformationList &b) {
        Rational sa = a.score(), sb = b.score();
        if (sa != sb)
            return sa > sb;
        if (a.origin_iteration != b.origin_iteration)
            return a.origin_iteration < b.origin_iteration;
        return a.id < b.id;
    });
    ranked.resize(std::min(ranked.size(), static_cast<std::size_t>(c)));
    return ranked;
}

SearchMode decide_mode(const SearchState &state, const std::optional<Rational> &latest_p, const BudgetConfig &config)
{
    if (state.mode == SearchMode::Done)
        return SearchMode::Done;
    if (state.format_errors > config.max_format_errors || state.mode == SearchMode::FailSafe)
        return SearchMode::FailSafe;
    if (state.mode == SearchMode::ShortCut)
        return SearchMode::ShortCut;
    if (latest_p && *latest_p > config.shortcut_threshold)
        return SearchMode::ShortCut;
    return SearchMode::Normal;
}

SearchState run_task(const Task &task, const BudgetConfig &config, Procedures &procedures, Simulator &simulator)
{
    task.validate();
    config.validate();

    SearchState state;
    state.task_id = task.id;
    state.remaining_budget = config.total_budget();

    CircuitKind kind = CircuitKind::General;
    try {
        kind = procedures.classify(task);
    } catch (const ClassificationError &) {
        state.mode = SearchMode::FailSafe;
    }
    state.circuit_kind = kind;

    std::optional<Procedure> pinned_procedure;
    std::optional<std::string> pinned_list;
    std::optional<int> selected_for;
    std::vector<std::string> selected;
    int failsafe_errors = 0;

    while (state.remaining_budget > 0 && state.mode != SearchMode::Done) {
        auto [iteration, position] = slot_of(config, config.total_budget() - state.remaining_budget);
        state.iteration = iteration;
        const SearchMode mode = state.mode;

        try {
            InformationList list;
            Procedure procedure = Procedure::Behav;
            if (mode == SearchMode::FailSafe) {
                list = procedures.extract(task, kind, iteration);
            } else if (mode == SearchMode::ShortCut) {
                list = *state.find_list(*pinned_list);
                procedure = *pinned_procedure;
            } else if (iteration == 1) {
                list = procedures.extract(task, kind, iteration);
                procedure = type_specific_procedure(kind);
            } else {
                if (selected_for != iteration) {
                    selected.clear();
                    auto c = config.top_candidates[static_cast<std::size_t>(iteration - 1)];
                    for (const auto &l : select_top(state.cluster, c))
                        selected.push_back(l.id);
                    selected_for = iteration;
                }
                if (selected.empty())
                    list = procedures.extract(task, kind, iteration);
                else
                    list = *state.find_list(selected[static_cast<std::size_t>(position) % selected.size()]);
            }

            CodeSample sample;
            sample.verilog_src = procedures.generate(procedure, list, task);
            sample.procedure = procedure;
            sample.info_list_id = list.id;
            sample.iteration = iteration;

            auto start = std::chrono::steady_clock::now();
            TestOutcome outcome = simulator.run(sample, task, sample_key(state.executed.size() + 1));
            std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;

            state.remaining_budget -= 1;
            Rational p = outcome.pass_rate();
            record_score(state, list, p);
            state.executed.push_back({std::move(sample), outcome, mode, wall.count()});
            if (outcome.status == TestStatus::Pass)
                state.solved = true;

            SearchMode next = decide_mode(state, p, config);
            if (next == SearchMode::ShortCut && mode != SearchMode::ShortCut) {
                pinned_procedure = procedure;
                pinned_list = list.id;
            }
            state.mode = next;
            if (config.stop_on_pass && outcome.status == TestStatus::Pass)
                state.mode = SearchMode::Done;
        } catch (const FormatError &) {
            state.format_errors += 1;
            if (mode == SearchMode::FailSafe && ++failsafe_errors > config.failsafe_format_error_limit) {
                state.abandoned = true;
                state.mode = SearchMode::Done;
                break;
            }
            state.mode = decide_mode(state, std::nullopt, config);
        }
    }
    state.mode = SearchMode::Done;
    return state;
}

SearchState run_baseline(
    const Task &task, int executions, const LlmSession &session, Simulator &simulator, bool stop_on_pass)
{
    task.validate();
    if (executions < 1)
        throw ContractViolation("baseline needs at least one execution");
    SearchState state;
    state.task_id = task.id;
    state.remaining_budget = executions;
    while (state.remaining_budget > 0) {
        CodeSample sample;
        sample.procedure = Procedure::Baseline;
        sample.verilog_src = baseline_code(
            session.ask("baseline", {{"spec", task.spec_text}, {"header", task.module_header}}), task.module_header);
        auto start = std::chrono::steady_clock::now();
        TestOutcome outcome = simulator.run(sample, task, sample_key(state.executed.size() + 1));
        std::chrono::duration<double> wall = std::chrono::steady_clock::now() - start;
        state.remaining_budget -= 1;
        state.executed.push_back({std::move(sample), outcome, SearchMode::Normal, wall.count()});
        if (outcome.status == TestStatus::Pass) {
            state.solved = true;
            if (stop_on_pass)
                break;
        }
    }
    state.mode = SearchMode::Done;
    return state;
}

} // namespace hdlgen
