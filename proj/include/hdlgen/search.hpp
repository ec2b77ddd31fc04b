// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/classify.hpp"
#include "hdlgen/core.hpp"
#include "hdlgen/prompts.hpp"
#include "hdlgen/sim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace hdlgen {

/// The LLM-facing steps the search loop drives. Swappable for tests.
class Procedures {
public:
    virtual ~Procedures() = default;

    /// Throws ClassificationError when the type cannot be determined.
    virtual CircuitKind classify(const Task &task) = 0;
    /// Throws FormatError.
    virtual InformationList extract(const Task &task, CircuitKind kind, int iteration) = 0;
    /// Verilog for `task` from `list` using `procedure`. Throws FormatError.
    virtual std::string generate(Procedure procedure, const InformationList &list, const Task &task) = 0;
};

/// Procedures backed by an LlmSession (COMB, SEQU, BEHAV as implemented in their modules).
class LlmProcedures : public Procedures {
public:
    explicit LlmProcedures(const LlmSession &session, Classifier *shared_cache = nullptr);

    CircuitKind classify(const Task &task) override;
    InformationList extract(const Task &task, CircuitKind kind, int iteration) override;
    std::string generate(Procedure procedure, const InformationList &list, const Task &task) override;

private:
    const LlmSession &session_;
    Classifier own_cache_;
    Classifier *cache_;
};

/// Procedure chosen for a classified circuit in the first iteration.
Procedure type_specific_procedure(CircuitKind kind);

/// The min(c, |cluster|) highest-scored lists; ties go to the earlier
/// origin iteration, then the smaller id. Throws ContractViolation for c < 1.
std::vector<InformationList> select_top(const std::vector<InformationList> &cluster, int c);

/// Mode after an event. Done is final; e_f > E_f forces FailSafe; FailSafe and
/// ShortCut persist; otherwise latest_p > W enters ShortCut.
SearchMode decide_mode(const SearchState &state, const std::optional<Rational> &latest_p, const BudgetConfig &config);

/// Budget search for one task. Simulator InfrastructureError and backend
/// errors propagate; format errors are counted and the step is retried.
SearchState run_task(const Task &task, const BudgetConfig &config, Procedures &procedures, Simulator &simulator);

/// The reference method: every execution samples the baseline prompt directly.
SearchState run_baseline(
    const Task &task, int executions, const LlmSession &session, Simulator &simulator, bool stop_on_pass = false);

} // namespace hdlgen
