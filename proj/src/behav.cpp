// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/behav.hpp"

#include "hdlgen/assembly.hpp"
#include "hdlgen/errors.hpp"
#include "hdlgen/extraction.hpp"
#include "hdlgen/verilog_text.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace hdlgen {
namespace {

std::string trim(std::string_view s, std::string_view extra = "")
{
    auto junk = [&](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || extra.find(c) != std::string_view::npos;
    };
    std::size_t b = 0, e = s.size();
    while (b < e && junk(s[b]))
        ++b;
    while (e > b && junk(s[e - 1]))
        --e;
    return std::string(s.substr(b, e - b));
}

void require_coded(const ComponentPlan &plan, std::size_t upto)
{
    for (std::size_t i = 0; i < upto; ++i)
        if (verilog::remove_whitespace(plan.components[i].code).empty())
            throw ContractViolation("component " + std::to_string(i + 1) + " has no code yet");
}

std::string render_code(const ComponentPlan &plan, std::size_t upto)
{
    std::string out;
    for (std::size_t i = 0; i < upto; ++i) {
        const auto &c = plan.components[i];
        if (!out.empty())
            out += "\n\n";
        out += "// " + std::to_string(i + 1) + ". " + c.name + "\n" + c.code;
    }
    return out.empty() ? "(none)" : out;
}

} // namespace

std::string ComponentPlan::render() const
{
    std::string out;
    for (std::size_t i = 0; i < components.size(); ++i)
        out += std::to_string(i + 1) + ". " + components[i].name + ": " + components[i].description + "\n";
    return out;
}

ComponentPlan parse_component_plan(std::string_view reply)
{
    ComponentPlan plan;
    std::set<std::string> used;
    for (const auto &item : parse_numbered_list(reply)) {
        Component c;
        auto colon = item.find(':');
        std::string name = colon == std::string::npos ? "" : trim(item.substr(0, colon), "*`_");
        if (name.empty() || name.find('\n') != std::string::npos) {
            name = "component " + std::to_string(plan.components.size() + 1);
            c.description = trim(item);
        } else {
            c.description = trim(item.substr(colon + 1));
        }
        std::string unique = name;
        for (int k = 2; used.count(unique); ++k)
            unique = name + "_" + std::to_string(k);
        used.insert(unique);
        c.name = unique;
        plan.components.push_back(std::move(c));
    }
    return plan;
}

ComponentPlan plan_components(const InformationList &info_list, const Task &task, const LlmSession &session)
{
    std::string reply = session.ask(
        "behav_plan", {{"spec", task.spec_text}, {"header", task.module_header}, {"info_list", info_list.render()}});
    auto plan = parse_component_plan(reply);
    if (plan.components.empty())
        throw FormatError("behav-plan", "reply lists no components");
    return plan;
}

ComponentPlan generate_component(
    ComponentPlan plan, std::size_t index, const InformationList &info_list, const Task &task, const LlmSession &session)
{
    if (index >= plan.components.size())
        throw ContractViolation("component index out of range");
    require_coded(plan, index);
    auto &c = plan.components[index];
    std::string reply = session.ask(
        "behav_component",
        {{"header", task.module_header},
         {"info_list", info_list.render()},
         {"components", plan.render()},
         {"prior_code", render_code(plan, index)},
         {"index", std::to_string(index + 1)},
         {"name", c.name},
         {"description", c.description}});
    for (auto &region : verilog::extract_code_blocks(reply)) {
        if (!verilog::remove_whitespace(region).empty()) {
            c.code = std::move(region);
            return plan;
        }
    }
    throw FormatError("behav-component", "no code for component '" + c.name + "'");
}

std::string assemble_components(const ComponentPlan &plan, std::string_view module_header)
{
    require_coded(plan, plan.components.size());
    std::vector<ModuleSection> sections;
    for (const auto &c : plan.components)
        sections.push_back({c.name, c.code});
    return assemble_module(module_header, sections, {}, "behav-integrate");
}

std::string integrate(const ComponentPlan &plan, std::string_view module_header, const LlmSession &session)
{
    if (plan.components.empty())
        throw ContractViolation("plan has no components");
    require_coded(plan, plan.components.size());
    std::vector<std::string> bodies;
    for (const auto &c : plan.components)
        bodies.push_back(c.code);
    std::string reply = session.ask(
        "behav_integrate", {{"header", std::string(module_header)}, {"components", render_code(plan, plan.components.size())}});
    if (auto merged = accept_module_reply(reply, bodies))
        return *merged;
    return assemble_components(plan, module_header);
}

std::string run_behav(const InformationList &info_list, const Task &task, const LlmSession &session)
{
    ComponentPlan plan = plan_components(info_list, task, session);
    for (std::size_t i = 0; i < plan.components.size(); ++i)
        plan = generate_component(std::move(plan), i, info_list, task, session);
    return integrate(plan, task.module_header, session);
}

} // namespace hdlgen
