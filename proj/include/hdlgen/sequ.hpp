// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/core.hpp"
#include "hdlgen/prompts.hpp"
#include "hdlgen/verilog_text.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdlgen {

enum class ColumnRole { CurrentState, Input, NextState, Output };

std::string_view to_string(ColumnRole role);

struct SttColumn {
    std::string name;
    ColumnRole role = ColumnRole::Input;

    friend bool operator==(const SttColumn &, const SttColumn &) = default;
};

struct SttCell {
    enum class Kind { Identifier, Bit, DontCare };
    Kind kind = Kind::Identifier;
    std::string text;

    friend bool operator==(const SttCell &, const SttCell &) = default;
};

struct StateTransitionTable {
    std::vector<SttColumn> columns;
    std::vector<std::vector<SttCell>> rows;

    /// Throws FormatError (stage "stt").
    void validate() const;

    std::size_t column_of(ColumnRole role) const;

    /// Identifiers seen in the current- and next-state columns, in first-seen order.
    std::vector<std::string> state_names() const;

    friend bool operator==(const StateTransitionTable &, const StateTransitionTable &) = default;
};

/// Parses the first markdown pipe table in `text`.
///
/// A column whose base name is a declared port takes that port's direction.
/// Otherwise "next" marks the next-state column and "current", "present" or
/// "state" the current-state column; remaining columns are inputs when left
/// of the next-state column and outputs when right of it.
/// Throws FormatError on no table, ragged rows or unresolved roles.
StateTransitionTable parse_stt(std::string_view text, const verilog::ModuleHeader *ports = nullptr);

/// Markdown pipe table that parse_stt reads back to the same structure.
std::string serialize_stt(const StateTransitionTable &table);

StateTransitionTable request_stt(const InformationList &info_list, const Task &task, const LlmSession &session);

enum class BlockRole { StateRegister, NextStateLogic, OutputLogic };

inline constexpr BlockRole kBlockOrder[] = {BlockRole::StateRegister, BlockRole::NextStateLogic, BlockRole::OutputLogic};

/// "State Register", "Next State Logic", "Output Logic".
std::string_view to_string(BlockRole role);

struct AlwaysBlockPlan {
    BlockRole role = BlockRole::StateRegister;
    std::string description;
    std::string code;
};

/// Two calls: a description of the block, then its code given the description.
/// `prior_blocks` must hold exactly the roles preceding `role`, in order
/// (ContractViolation otherwise). Throws FormatError unless the reply holds
/// exactly one always construct.
AlwaysBlockPlan generate_block(
    BlockRole role,
    const StateTransitionTable &stt,
    const InformationList &info_list,
    const std::vector<AlwaysBlockPlan> &prior_blocks,
    const Task &task,
    const LlmSession &session);

/// The single always construct in a code reply. Throws FormatError.
std::string extract_single_always(std::string_view reply);

/// Deterministic module from header plus blocks in role order. Throws
/// ContractViolation unless each role appears once, FormatError when a block is empty.
std::string assemble_blocks(
    const std::vector<AlwaysBlockPlan> &plans, std::string_view module_header, const std::vector<std::string> &state_names = {});

/// Asks the backend to merge; keeps its reply only if it is a balanced module
/// containing every block, otherwise falls back to assemble_blocks.
std::string merge_blocks(
    const std::vector<AlwaysBlockPlan> &plans,
    std::string_view module_header,
    const LlmSession &session,
    const std::vector<std::string> &state_names = {});

/// Full SEQU procedure for one information list.
std::string run_sequ(const InformationList &info_list, const Task &task, const LlmSession &session);

} // namespace hdlgen
