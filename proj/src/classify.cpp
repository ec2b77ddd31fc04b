// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/classify.hpp"

#include "hdlgen/errors.hpp"
#include "hdlgen/verilog_text.hpp"

#include <algorithm>
#include <cctype>

namespace hdlgen {

using verilog::Token;
using verilog::TokenKind;

std::optional<CircuitKind> deduce_type_from_code(std::string_view verilog_src)
{
    auto tokens = verilog::tokenize(verilog_src);
    bool edge = false;
    bool level = false;

    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const Token &t = tokens[i];
        if (t.kind != TokenKind::Identifier)
            continue;

        if (t.text == "always_ff") {
            edge = true;
        } else if (t.text == "always_comb" || t.text == "always_latch") {
            level = true;
        } else if (t.text == "always") {
            if (i + 1 >= tokens.size() || tokens[i + 1].text != "@")
                continue;
            std::size_t j = i + 2;
            if (j < tokens.size() && tokens[j].text == "(") {
                int depth = 0;
                bool found_edge = false;
                for (; j < tokens.size(); ++j) {
                    if (tokens[j].text == "(")
                        ++depth;
                    else if (tokens[j].text == ")" && --depth == 0)
                        break;
                    else if (tokens[j].text == "posedge" || tokens[j].text == "negedge")
                        found_edge = true;
                }
                (found_edge ? edge : level) = true;
            } else if (j < tokens.size()) {
                level = true; // @* or @signal
            }
        } else if (t.text == "assign") {
            // assign <lvalue> = ... ;
            std::size_t j = i + 1;
            if (j < tokens.size() && (tokens[j].kind == TokenKind::Identifier || tokens[j].text == "{")) {
                for (; j < tokens.size() && tokens[j].text != ";"; ++j)
                    if (tokens[j].text == "=") {
                        level = true;
                        break;
                    }
            }
        }
    }

    if (edge)
        return CircuitKind::Sequential;
    if (level)
        return CircuitKind::Combinational;
    return std::nullopt;
}

std::optional<CircuitKind> parse_type_answer(std::string_view answer)
{
    std::string lower(answer);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    bool comb = lower.find("combinational") != std::string::npos || lower.find("combinatorial") != std::string::npos;
    bool seq = lower.find("sequential") != std::string::npos;
    if (comb == seq)
        return std::nullopt;
    return comb ? CircuitKind::Combinational : CircuitKind::Sequential;
}

CircuitKind classify_task(const Task &task, const LlmSession &session)
{
    if (task.spec_text.empty())
        throw ContractViolation("task '" + task.id + "' has an empty specification");

    const Bindings bindings{{"spec", task.spec_text}, {"header", task.module_header}};
    std::string probe = session.ask("classify_probe", bindings);

    auto blocks = verilog::extract_code_blocks(probe);
    std::string code;
    for (const auto &b : blocks) {
        code += b;
        code += '\n';
    }
    if (auto kind = deduce_type_from_code(code))
        return *kind;

    std::string answer = session.ask("classify_direct", bindings);
    if (auto kind = parse_type_answer(answer))
        return *kind;
    throw ClassificationError("could not classify task '" + task.id + "'");
}

CircuitKind Classifier::classify(const Task &task, const LlmSession &session)
{
    if (auto hit = cached(task.id))
        return *hit;
    CircuitKind kind = classify_task(task, session);
    std::lock_guard lock(mutex_);
    cache_.emplace(task.id, kind);
    return cache_.at(task.id);
}

std::optional<CircuitKind> Classifier::cached(const std::string &task_id) const
{
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(task_id); it != cache_.end())
        return it->second;
    return std::nullopt;
}

} // namespace hdlgen
