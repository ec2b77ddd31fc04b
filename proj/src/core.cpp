// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/core.hpp"

#include "hdlgen/errors.hpp"

#include <cstdint>
#include <numeric>

namespace hdlgen {

void Task::validate() const
{
    if (id.empty())
        throw ContractViolation("task id is empty");
    if (testbench_src.empty())
        throw ContractViolation("task '" + id + "' has an empty testbench");
}

std::string_view to_string(DatasetSplit split)
{
    return split == DatasetSplit::Human ? "human" : "machine";
}

std::string_view to_string(CircuitKind kind)
{
    switch (kind) {
    case CircuitKind::Combinational:
        return "combinational";
    case CircuitKind::Sequential:
        return "sequential";
    case CircuitKind::General:
        return "general";
    }
    return "?";
}

std::string_view to_string(Procedure procedure)
{
    switch (procedure) {
    case Procedure::Comb:
        return "COMB";
    case Procedure::Sequ:
        return "SEQU";
    case Procedure::Behav:
        return "BEHAV";
    case Procedure::Baseline:
        return "BASELINE";
    }
    return "?";
}

std::string_view to_string(TestStatus status)
{
    switch (status) {
    case TestStatus::Pass:
        return "pass";
    case TestStatus::PartialFail:
        return "partial_fail";
    case TestStatus::CompileError:
        return "compile_error";
    case TestStatus::SimTimeout:
        return "sim_timeout";
    }
    return "?";
}

std::string_view to_string(SearchMode mode)
{
    switch (mode) {
    case SearchMode::Normal:
        return "normal";
    case SearchMode::ShortCut:
        return "shortcut";
    case SearchMode::FailSafe:
        return "failsafe";
    case SearchMode::Done:
        return "done";
    }
    return "?";
}

DatasetSplit parse_split(std::string_view text)
{
    if (text == "human")
        return DatasetSplit::Human;
    if (text == "machine")
        return DatasetSplit::Machine;
    throw InputError("unknown dataset split '" + std::string(text) + "'");
}

Rational InformationList::score() const
{
    if (pass_rate_history.empty())
        return Rational(0);
    Rational sum = std::accumulate(pass_rate_history.begin(), pass_rate_history.end(), Rational(0));
    return sum / Rational(static_cast<std::int64_t>(pass_rate_history.size()));
}

std::string InformationList::render() const
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += std::to_string(i + 1);
        out += ". ";
        out += items[i];
        out += '\n';
    }
    return out;
}

InformationList make_information_list(std::vector<std::string> items, int origin_iteration)
{
    // FNV-1a over the items with a 0xff separator byte.
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (const auto &item : items) {
        for (unsigned char ch : item) {
            hash ^= ch;
            hash *= 0x100000001b3ull;
        }
        hash ^= 0xffu;
        hash *= 0x100000001b3ull;
    }
    static constexpr char digits[] = "0123456789abcdef";
    std::string id(16, '0');
    for (int i = 15; i >= 0; --i) {
        id[static_cast<std::size_t>(i)] = digits[hash & 0xf];
        hash >>= 4;
    }

    InformationList list;
    list.id = std::move(id);
    list.items = std::move(items);
    list.origin_iteration = origin_iteration;
    return list;
}

InformationList update_score(InformationList list, const Rational &pass_rate)
{
    if (pass_rate < Rational(0) || pass_rate > Rational(1))
        throw ContractViolation("pass rate " + pass_rate.to_string() + " outside [0, 1]");
    list.pass_rate_history.push_back(pass_rate);
    return list;
}

TestOutcome make_outcome(int passed, int total)
{
    if (total < 1 || passed < 0 || passed > total)
        throw ContractViolation(
            "invalid test outcome " + std::to_string(passed) + "/" + std::to_string(total));
    TestOutcome out;
    out.passed = passed;
    out.total = total;
    out.status = passed == total ? TestStatus::Pass : TestStatus::PartialFail;
    return out;
}

TestOutcome compile_error_outcome()
{
    return TestOutcome{TestStatus::CompileError, 0, 1};
}

TestOutcome timeout_outcome()
{
    return TestOutcome{TestStatus::SimTimeout, 0, 1};
}

int BudgetConfig::total_budget() const
{
    return std::accumulate(samples_per_iteration.begin(), samples_per_iteration.end(), 0);
}

void BudgetConfig::validate() const
{
    if (samples_per_iteration.empty())
        throw ContractViolation("budget needs at least one iteration");
    for (int n : samples_per_iteration)
        if (n < 1)
            throw ContractViolation("samples per iteration must be positive");
    if (top_candidates.size() != samples_per_iteration.size())
        throw ContractViolation("top-candidate list must have one entry per iteration");
    for (std::size_t s = 1; s < top_candidates.size(); ++s)
        if (top_candidates[s] < 1)
            throw ContractViolation("top-candidate counts must be positive");
    if (shortcut_threshold <= Rational(0) || shortcut_threshold > Rational(1))
        throw ContractViolation("short-cut threshold must lie in (0, 1]");
    if (max_format_errors < 0)
        throw ContractViolation("format-error allowance must be non-negative");
    if (failsafe_format_error_limit < 0)
        throw ContractViolation("fail-safe format-error limit must be non-negative");
}

const InformationList *SearchState::find_list(std::string_view id) const
{
    for (const auto &list : cluster)
        if (list.id == id)
            return &list;
    return nullptr;
}

InformationList *SearchState::find_list(std::string_view id)
{
    for (auto &list : cluster)
        if (list.id == id)
            return &list;
    return nullptr;
}

} // namespace hdlgen
