// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/core.hpp"
#include "hdlgen/prompts.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hdlgen {

struct Component {
    std::string name;
    std::string description;
    std::string code;
};

struct ComponentPlan {
    std::vector<Component> components;

    /// Numbered "N. name: description" lines.
    std::string render() const;
};

/// Items of a "N. name: description" list. Names are made unique with a
/// numeric suffix; an item without a colon is named "component N".
ComponentPlan parse_component_plan(std::string_view reply);

/// Throws FormatError (stage "behav-plan") when no component parses.
ComponentPlan plan_components(const InformationList &info_list, const Task &task, const LlmSession &session);

/// Fills component `index` from the first code region of the reply, verbatim.
/// Throws ContractViolation when an earlier component has no code yet or
/// `index` is out of range, FormatError when the reply has no code.
ComponentPlan generate_component(
    ComponentPlan plan, std::size_t index, const InformationList &info_list, const Task &task, const LlmSession &session);

/// Local fallback assembly of a fully coded plan.
std::string assemble_components(const ComponentPlan &plan, std::string_view module_header);

/// Asks the backend to integrate; accepts the reply only when it is a balanced
/// module holding every component, else assembles locally.
/// Throws ContractViolation when a component has no code.
std::string integrate(const ComponentPlan &plan, std::string_view module_header, const LlmSession &session);

/// Full BEHAV procedure for one information list.
std::string run_behav(const InformationList &info_list, const Task &task, const LlmSession &session);

} // namespace hdlgen
