// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/assembly.hpp"

#include "hdlgen/errors.hpp"
#include "hdlgen/verilog_text.hpp"

#include <algorithm>

namespace hdlgen {

std::optional<std::string> accept_module_reply(std::string_view reply, const std::vector<std::string> &bodies)
{
    for (const auto &region : verilog::extract_code_blocks(reply)) {
        if (!verilog::has_balanced_module(region))
            continue;
        bool all = std::all_of(bodies.begin(), bodies.end(), [&](const std::string &b) {
            return verilog::contains_ignoring_whitespace(region, b);
        });
        if (all)
            return region;
    }
    return std::nullopt;
}

std::string assemble_module(
    std::string_view module_header,
    const std::vector<ModuleSection> &sections,
    const std::vector<std::string> &state_names,
    const std::string &stage)
{
    std::vector<std::string> snippets;
    for (const auto &s : sections) {
        if (verilog::remove_whitespace(s.code).empty())
            throw FormatError(stage, "no code for '" + s.label + "'");
        snippets.push_back(s.code);
    }

    verilog::ModuleHeader header;
    try {
        header = verilog::parse_module_header(module_header);
    } catch (const InputError &e) {
        throw FormatError(stage, std::string("cannot assemble without a module header: ") + e.what());
    }

    auto inferred = verilog::infer_declarations(header, snippets, state_names);
    std::string out = verilog::header_with_reg_outputs(header, inferred.outputs_needing_reg);
    out += '\n';
    for (const auto &line : inferred.lines)
        out += '\t' + line + '\n';
    for (const auto &s : sections) {
        out += "\n\t// " + s.label + '\n';
        out += s.code;
        if (out.back() != '\n')
            out += '\n';
    }
    out += "endmodule\n";
    return out;
}

} // namespace hdlgen
