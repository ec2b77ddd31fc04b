// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/core.hpp"
#include "hdlgen/prompts.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string_view>

namespace hdlgen {

/// Static circuit-type deduction from (possibly broken) Verilog.
///
/// Sequential when some always block has a posedge/negedge sensitivity (or is
/// always_ff); Combinational when only continuous assignments and
/// level-sensitive always blocks appear; nullopt when neither construct is found.
/// Comments and string literals are ignored.
std::optional<CircuitKind> deduce_type_from_code(std::string_view verilog_src);

/// Reads a one-word answer to the direct classification question.
std::optional<CircuitKind> parse_type_answer(std::string_view answer);

/// Probe-code classifier with a direct-question fallback. Each task id is
/// classified at most once; later calls return the cached type.
class Classifier {
public:
    /// Throws ClassificationError when neither strategy yields a type.
    CircuitKind classify(const Task &task, const LlmSession &session);

    std::optional<CircuitKind> cached(const std::string &task_id) const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, CircuitKind> cache_;
};

/// One-shot classification without caching.
CircuitKind classify_task(const Task &task, const LlmSession &session);

} // namespace hdlgen
