// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/sequ.hpp"

#include "hdlgen/assembly.hpp"
#include "hdlgen/errors.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace hdlgen {
namespace {

constexpr const char *kSttStage = "stt";
constexpr const char *kBlockStage = "sequ-block";

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_row(std::string_view line)
{
    std::string t = trim(line);
    if (!t.empty() && t.front() == '|')
        t.erase(0, 1);
    if (!t.empty() && t.back() == '|')
        t.pop_back();
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        auto bar = t.find('|', start);
        cells.push_back(trim(std::string_view(t).substr(start, bar == std::string::npos ? std::string::npos : bar - start)));
        if (bar == std::string::npos)
            break;
        start = bar + 1;
    }
    return cells;
}

bool is_separator(const std::vector<std::string> &cells)
{
    static const std::regex dashes(R"(:?-+:?)");
    return std::all_of(cells.begin(), cells.end(), [](const std::string &c) { return std::regex_match(c, dashes); });
}

SttCell classify_cell(const std::string &text)
{
    static const std::regex sized(R"([0-9]*'[bB][01_]+)");
    if (text == "X" || text == "x" || text == "-")
        return {SttCell::Kind::DontCare, text};
    bool bits = !text.empty() && std::all_of(text.begin(), text.end(), [](char c) { return c == '0' || c == '1'; });
    if (bits || std::regex_match(text, sized))
        return {SttCell::Kind::Bit, text};
    return {SttCell::Kind::Identifier, text};
}

std::optional<ColumnRole> role_from_ports(const std::string &name, const verilog::ModuleHeader *ports)
{
    if (!ports)
        return std::nullopt;
    std::string base(verilog::base_name(verilog::remove_whitespace(name)));
    if (const auto *p = ports->find(base))
        return p->direction == verilog::Direction::Output ? ColumnRole::Output : ColumnRole::Input;
    return std::nullopt;
}

std::optional<ColumnRole> role_from_name(const std::string &name)
{
    std::string l = lower(name);
    if (l.find("next") != std::string::npos)
        return ColumnRole::NextState;
    if (l.find("current") != std::string::npos || l.find("present") != std::string::npos
        || l.find("state") != std::string::npos)
        return ColumnRole::CurrentState;
    return std::nullopt;
}

std::string render_blocks(const std::vector<AlwaysBlockPlan> &blocks)
{
    if (blocks.empty())
        return "(none)";
    std::string out;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i)
            out += "\n\n";
        out += std::to_string(i + 1) + ". " + std::string(to_string(blocks[i].role)) + ":\n" + blocks[i].code;
    }
    return out;
}

/// Throws ContractViolation unless every role appears exactly once.
std::vector<AlwaysBlockPlan> in_role_order(const std::vector<AlwaysBlockPlan> &plans)
{
    std::vector<AlwaysBlockPlan> ordered;
    for (auto role : kBlockOrder) {
        auto matches = [role](const AlwaysBlockPlan &p) { return p.role == role; };
        if (std::count_if(plans.begin(), plans.end(), matches) != 1)
            throw ContractViolation("merge needs exactly one " + std::string(to_string(role)) + " block");
        ordered.push_back(*std::find_if(plans.begin(), plans.end(), matches));
    }
    return ordered;
}

} // namespace

std::string_view to_string(ColumnRole role)
{
    switch (role) {
    case ColumnRole::CurrentState:
        return "current_state";
    case ColumnRole::Input:
        return "input";
    case ColumnRole::NextState:
        return "next_state";
    case ColumnRole::Output:
        return "output";
    }
    return "?";
}

std::string_view to_string(BlockRole role)
{
    switch (role) {
    case BlockRole::StateRegister:
        return "State Register";
    case BlockRole::NextStateLogic:
        return "Next State Logic";
    case BlockRole::OutputLogic:
        return "Output Logic";
    }
    return "?";
}

void StateTransitionTable::validate() const
{
    auto count = [&](ColumnRole r) {
        return std::count_if(columns.begin(), columns.end(), [r](const SttColumn &c) { return c.role == r; });
    };
    if (count(ColumnRole::CurrentState) != 1)
        throw FormatError(kSttStage, "expected exactly one current-state column");
    if (count(ColumnRole::NextState) != 1)
        throw FormatError(kSttStage, "expected exactly one next-state column");
    if (rows.empty())
        throw FormatError(kSttStage, "table has no rows");
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (rows[r].size() != columns.size())
            throw FormatError(
                kSttStage,
                "row " + std::to_string(r + 1) + " has " + std::to_string(rows[r].size()) + " cells, expected "
                    + std::to_string(columns.size()));
}

std::size_t StateTransitionTable::column_of(ColumnRole role) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i].role == role)
            return i;
    throw ContractViolation("table has no " + std::string(to_string(role)) + " column");
}

std::vector<std::string> StateTransitionTable::state_names() const
{
    static const std::regex identifier(R"([A-Za-z_][A-Za-z0-9_$]*)");
    std::vector<std::string> names;
    const std::size_t cols[] = {column_of(ColumnRole::CurrentState), column_of(ColumnRole::NextState)};
    for (const auto &row : rows)
        for (auto c : cols) {
            const auto &cell = row[c];
            if (cell.kind == SttCell::Kind::Identifier && std::regex_match(cell.text, identifier)
                && std::find(names.begin(), names.end(), cell.text) == names.end())
                names.push_back(cell.text);
        }
    return names;
}

StateTransitionTable parse_stt(std::string_view text, const verilog::ModuleHeader *ports)
{
    std::vector<std::vector<std::string>> raw;
    std::size_t pos = 0;
    bool in_table = false;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string line = trim(text.substr(pos, eol - pos));
        if (!line.empty() && line.front() == '|') {
            in_table = true;
            auto cells = split_row(line);
            if (!is_separator(cells))
                raw.push_back(std::move(cells));
        } else if (in_table) {
            break;
        }
        if (eol == text.size())
            break;
        pos = eol + 1;
    }
    if (raw.empty())
        throw FormatError(kSttStage, "no markdown table found");

    StateTransitionTable table;
    const auto &names = raw.front();
    std::vector<std::optional<ColumnRole>> roles;
    std::optional<std::size_t> next_col;
    for (std::size_t i = 0; i < names.size(); ++i) {
        auto role = role_from_ports(names[i], ports);
        if (!role)
            role = role_from_name(names[i]);
        if (role == ColumnRole::NextState && !next_col)
            next_col = i;
        roles.push_back(role);
    }
    if (!next_col)
        throw FormatError(kSttStage, "no next-state column");
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i].empty())
            throw FormatError(kSttStage, "column " + std::to_string(i + 1) + " has no name");
        ColumnRole role = roles[i].value_or(i < *next_col ? ColumnRole::Input : ColumnRole::Output);
        table.columns.push_back({names[i], role});
    }

    for (std::size_t r = 1; r < raw.size(); ++r) {
        std::vector<SttCell> row;
        for (std::size_t c = 0; c < raw[r].size(); ++c) {
            if (raw[r][c].empty())
                throw FormatError(
                    kSttStage, "row " + std::to_string(r) + ", column " + std::to_string(c + 1) + " is empty");
            row.push_back(classify_cell(raw[r][c]));
        }
        table.rows.push_back(std::move(row));
    }
    table.validate();
    return table;
}

std::string serialize_stt(const StateTransitionTable &table)
{
    auto line = [](const std::vector<std::string> &cells) {
        std::string out = "|";
        for (const auto &c : cells)
            out += " " + c + " |";
        return out + "\n";
    };
    std::vector<std::string> names, sep;
    for (const auto &c : table.columns) {
        names.push_back(c.name);
        sep.emplace_back(std::max<std::size_t>(3, c.name.size()), '-');
    }
    std::string out = line(names) + line(sep);
    for (const auto &row : table.rows) {
        std::vector<std::string> cells;
        for (const auto &c : row)
            cells.push_back(c.text);
        out += line(cells);
    }
    return out;
}

StateTransitionTable request_stt(const InformationList &info_list, const Task &task, const LlmSession &session)
{
    std::string reply = session.ask("stt", {{"info_list", info_list.render()}, {"header", task.module_header}});
    std::optional<verilog::ModuleHeader> ports;
    try {
        if (!task.module_header.empty())
            ports = verilog::parse_module_header(task.module_header);
    } catch (const InputError &) {
    }
    return parse_stt(reply, ports ? &*ports : nullptr);
}

std::string extract_single_always(std::string_view reply)
{
    int total = 0;
    std::string found;
    for (const auto &region : verilog::extract_code_blocks(reply)) {
        int n = verilog::count_always(region);
        if (n == 0)
            continue;
        total += n;
        if (verilog::contains_keyword(region, "module")) {
            auto always = verilog::always_regions(region);
            found = always.empty() ? region : always.front();
        } else {
            found = region;
        }
    }
    if (total != 1)
        throw FormatError(kBlockStage, "expected one always construct, found " + std::to_string(total));
    return found;
}

AlwaysBlockPlan generate_block(
    BlockRole role,
    const StateTransitionTable &stt,
    const InformationList &info_list,
    const std::vector<AlwaysBlockPlan> &prior_blocks,
    const Task &task,
    const LlmSession &session)
{
    std::size_t position = 0;
    while (kBlockOrder[position] != role)
        ++position;
    if (prior_blocks.size() != position)
        throw ContractViolation("always blocks must be generated in order");
    for (std::size_t i = 0; i < position; ++i)
        if (prior_blocks[i].role != kBlockOrder[i])
            throw ContractViolation("always blocks must be generated in order");

    Bindings bindings{
        {"info_list", info_list.render()},
        {"stt", serialize_stt(stt)},
        {"header", task.module_header},
        {"prior_blocks", render_blocks(prior_blocks)},
        {"block_role", std::string(to_string(role))},
    };
    AlwaysBlockPlan plan;
    plan.role = role;
    plan.description = trim(session.ask("sequ_block_description", bindings));
    if (plan.description.empty())
        throw FormatError(kBlockStage, "empty block description");
    bindings["description"] = plan.description;
    plan.code = extract_single_always(session.ask("sequ_block_code", bindings));
    return plan;
}

std::string assemble_blocks(
    const std::vector<AlwaysBlockPlan> &plans, std::string_view module_header, const std::vector<std::string> &state_names)
{
    std::vector<ModuleSection> sections;
    for (const auto &p : in_role_order(plans))
        sections.push_back({std::string(to_string(p.role)), p.code});
    return assemble_module(module_header, sections, state_names, "sequ-merge");
}

std::string merge_blocks(
    const std::vector<AlwaysBlockPlan> &plans,
    std::string_view module_header,
    const LlmSession &session,
    const std::vector<std::string> &state_names)
{
    auto ordered = in_role_order(plans);
    std::vector<std::string> bodies;
    for (const auto &p : ordered)
        bodies.push_back(p.code);
    std::string reply = session.ask("sequ_merge", {{"header", std::string(module_header)}, {"blocks", render_blocks(ordered)}});
    if (auto merged = accept_module_reply(reply, bodies))
        return *merged;
    return assemble_blocks(ordered, module_header, state_names);
}

std::string run_sequ(const InformationList &info_list, const Task &task, const LlmSession &session)
{
    StateTransitionTable stt = request_stt(info_list, task, session);
    std::vector<AlwaysBlockPlan> blocks;
    for (auto role : kBlockOrder)
        blocks.push_back(generate_block(role, stt, info_list, blocks, task, session));
    return merge_blocks(blocks, task.module_header, session, stt.state_names());
}

} // namespace hdlgen
