// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/extraction.hpp"

#include "hdlgen/errors.hpp"

#include <cctype>
#include <optional>

namespace hdlgen {
namespace {

struct Marker {
    std::size_t indent;
    std::string rest;
};

std::optional<Marker> numbered_marker(std::string_view line)
{
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
        ++i;
    std::size_t indent = i;
    // tolerate markdown emphasis around the number: **1.**
    std::size_t stars = 0;
    while (i < line.size() && line[i] == '*' && stars < 2) {
        ++i;
        ++stars;
    }
    std::size_t digits = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])))
        ++i;
    if (i == digits || i - digits > 4)
        return std::nullopt;
    if (i >= line.size() || (line[i] != '.' && line[i] != ')'))
        return std::nullopt;
    ++i;
    for (std::size_t s = 0; s < stars && i < line.size() && line[i] == '*'; ++s)
        ++i;
    if (i < line.size() && line[i] != ' ' && line[i] != '\t')
        return std::nullopt; // "1.5" or "3.14"
    return Marker{indent, std::string(line.substr(i))};
}

std::string trim(std::string_view s)
{
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

bool indented(std::string_view line)
{
    return !line.empty() && (line.front() == ' ' || line.front() == '\t');
}

} // namespace

std::vector<std::string> parse_numbered_list(std::string_view text)
{
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        lines.emplace_back(line);
        if (eol == text.size())
            break;
        pos = eol + 1;
    }

    // Indices of top-level marker lines.
    std::optional<std::size_t> top_indent;
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto m = numbered_marker(lines[i]);
        if (!m)
            continue;
        if (!top_indent)
            top_indent = m->indent;
        if (m->indent <= *top_indent)
            starts.push_back(i);
    }

    std::vector<std::string> items;
    for (std::size_t k = 0; k < starts.size(); ++k) {
        std::size_t first = starts[k];
        bool last_item = k + 1 == starts.size();
        std::size_t end = last_item ? lines.size() : starts[k + 1];

        std::string item = trim(numbered_marker(lines[first])->rest);
        for (std::size_t i = first + 1; i < end; ++i) {
            const std::string &line = lines[i];
            std::string t = trim(line);
            if (t.empty())
                continue;
            if (last_item && !indented(line) && !numbered_marker(line))
                break;
            if (!item.empty())
                item += '\n';
            item += t;
        }
        items.push_back(std::move(item));
    }
    return items;
}

InformationList extract_info_list(const Task &task, CircuitKind kind, const LlmSession &session, int iteration)
{
    const char *prompt = kind == CircuitKind::Combinational ? "infolist_comb" : "infolist_sequ";
    std::string reply = session.ask(prompt, {{"spec", task.spec_text}, {"header", task.module_header}});
    auto items = parse_numbered_list(reply);
    if (items.empty())
        throw FormatError("info-list", "reply contains no numbered items");
    return make_information_list(std::move(items), iteration);
}

} // namespace hdlgen
