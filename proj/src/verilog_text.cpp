// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/verilog_text.hpp"

#include "hdlgen/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <functional>
#include <map>
#include <set>

namespace hdlgen::verilog {
namespace {

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

constexpr std::array<std::string_view, 20> kMultiCharSymbols = {
    "<<<", ">>>", "===", "!==", "<=", ">=", "==", "!=", "&&", "||", "<<", ">>", "->", "+:", "-:",
    "**", "~&", "~|", "~^", "^~"};

std::optional<int> parse_int(std::string_view s)
{
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        return std::nullopt;
    return value;
}

/// Width of a sized literal such as 8'hff, or nullopt.
std::optional<int> literal_width(std::string_view text)
{
    auto tick = text.find('\'');
    if (tick == std::string_view::npos || tick == 0)
        return std::nullopt;
    return parse_int(text.substr(0, tick));
}

bool is_symbol(const Token &t, std::string_view s)
{
    return t.kind == TokenKind::Symbol && t.text == s;
}

bool is_word(const Token &t, std::string_view s)
{
    return t.kind == TokenKind::Identifier && t.text == s;
}

/// Index of the token closing the bracket opened at `open`, or tokens.size().
std::size_t match_bracket(const std::vector<Token> &tokens, std::size_t open)
{
    const std::string &o = tokens[open].text;
    std::string_view c = o == "(" ? ")" : o == "[" ? "]" : "}";
    int depth = 0;
    for (std::size_t i = open; i < tokens.size(); ++i) {
        if (tokens[i].kind != TokenKind::Symbol)
            continue;
        if (tokens[i].text == o)
            ++depth;
        else if (tokens[i].text == c && --depth == 0)
            return i;
    }
    return tokens.size();
}

std::size_t match_keyword_block(
    const std::vector<Token> &tokens, std::size_t open, std::string_view opener, std::string_view closer)
{
    int depth = 0;
    for (std::size_t i = open; i < tokens.size(); ++i) {
        if (tokens[i].kind != TokenKind::Identifier)
            continue;
        if (tokens[i].text == opener)
            ++depth;
        else if (tokens[i].text == closer && --depth == 0)
            return i;
    }
    return tokens.size() - 1;
}

std::size_t statement_end(const std::vector<Token> &tokens, std::size_t i);

/// Skips `@(...)`, `@*`, `@ident`, or `#delay` starting at i; returns the index after it.
std::size_t skip_event_control(const std::vector<Token> &tokens, std::size_t i)
{
    while (i < tokens.size() && (is_symbol(tokens[i], "@") || is_symbol(tokens[i], "#"))) {
        ++i;
        if (i >= tokens.size())
            return i;
        if (is_symbol(tokens[i], "(")) {
            i = match_bracket(tokens, i) + 1;
        } else {
            ++i; // `*`, an identifier, or a delay value
        }
    }
    return i;
}

/// Index of the last token of the statement starting at i.
std::size_t statement_end(const std::vector<Token> &tokens, std::size_t i)
{
    if (i >= tokens.size())
        return tokens.size() - 1;
    const Token &t = tokens[i];
    if (is_word(t, "begin"))
        return match_keyword_block(tokens, i, "begin", "end");
    if (is_word(t, "fork"))
        return match_keyword_block(tokens, i, "fork", "join");
    if (is_word(t, "case") || is_word(t, "casez") || is_word(t, "casex")) {
        int depth = 0;
        for (std::size_t j = i; j < tokens.size(); ++j) {
            const auto &w = tokens[j];
            if (is_word(w, "case") || is_word(w, "casez") || is_word(w, "casex"))
                ++depth;
            else if (is_word(w, "endcase") && --depth == 0)
                return j;
        }
        return tokens.size() - 1;
    }
    if (is_word(t, "if")) {
        std::size_t j = i + 1;
        if (j < tokens.size() && is_symbol(tokens[j], "("))
            j = match_bracket(tokens, j) + 1;
        std::size_t last = statement_end(tokens, j);
        if (last + 1 < tokens.size() && is_word(tokens[last + 1], "else"))
            last = statement_end(tokens, last + 2);
        return last;
    }
    if (is_word(t, "for") || is_word(t, "while") || is_word(t, "repeat")) {
        std::size_t j = i + 1;
        if (j < tokens.size() && is_symbol(tokens[j], "("))
            j = match_bracket(tokens, j) + 1;
        return statement_end(tokens, j);
    }
    if (is_word(t, "forever"))
        return statement_end(tokens, i + 1);
    if (is_symbol(t, "@") || is_symbol(t, "#"))
        return statement_end(tokens, skip_event_control(tokens, i));
    for (std::size_t j = i; j < tokens.size(); ++j)
        if (is_symbol(tokens[j], ";"))
            return j;
    return tokens.size() - 1;
}

struct Decl {
    std::string name;
    std::string kind; // reg, wire, integer
    int width = 1;
    bool width_known = false;
};

const std::set<std::string_view> kDeclKeywords = {
    "reg", "wire", "logic", "integer", "genvar", "localparam", "parameter", "bit", "int", "real", "tri"};

} // namespace

std::string strip_comments_and_strings(std::string_view src)
{
    std::string out(src);
    std::size_t i = 0;
    while (i < out.size()) {
        if (out[i] == '/' && i + 1 < out.size() && out[i + 1] == '/') {
            while (i < out.size() && out[i] != '\n')
                out[i++] = ' ';
        } else if (out[i] == '/' && i + 1 < out.size() && out[i + 1] == '*') {
            out[i] = out[i + 1] = ' ';
            i += 2;
            while (i < out.size() && !(out[i] == '*' && i + 1 < out.size() && out[i + 1] == '/')) {
                if (out[i] != '\n')
                    out[i] = ' ';
                ++i;
            }
            if (i < out.size()) {
                out[i] = out[i + 1] = ' ';
                i += 2;
            }
        } else if (out[i] == '"') {
            out[i++] = ' ';
            while (i < out.size() && out[i] != '"' && out[i] != '\n') {
                if (out[i] == '\\' && i + 1 < out.size())
                    out[i++] = ' ';
                out[i++] = ' ';
            }
            if (i < out.size() && out[i] == '"')
                out[i++] = ' ';
        } else {
            ++i;
        }
    }
    return out;
}

std::vector<Token> tokenize(std::string_view src)
{
    const std::string text = strip_comments_and_strings(src);
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (ident_start(c) || c == '$') {
            while (i < n && ident_char(text[i]))
                ++i;
            tokens.push_back({TokenKind::Identifier, text.substr(start, i - start), start, i});
            continue;
        }
        if (c == '\\') {
            // escaped identifier runs to whitespace
            ++i;
            while (i < n && !std::isspace(static_cast<unsigned char>(text[i])))
                ++i;
            tokens.push_back({TokenKind::Identifier, text.substr(start, i - start), start, i});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || (c == '\'' && i + 1 < n && std::isalpha(static_cast<unsigned char>(text[i + 1])))) {
            while (i < n && (std::isdigit(static_cast<unsigned char>(text[i])) || text[i] == '_'))
                ++i;
            if (i < n && text[i] == '\'') {
                ++i;
                if (i < n && (text[i] == 's' || text[i] == 'S'))
                    ++i;
                if (i < n && std::isalpha(static_cast<unsigned char>(text[i])))
                    ++i;
                while (i < n && (std::isxdigit(static_cast<unsigned char>(text[i])) || text[i] == '_'
                                 || text[i] == 'x' || text[i] == 'X' || text[i] == 'z' || text[i] == 'Z'
                                 || text[i] == '?'))
                    ++i;
            } else if (i < n && text[i] == '.') {
                ++i;
                while (i < n && std::isdigit(static_cast<unsigned char>(text[i])))
                    ++i;
            }
            tokens.push_back({TokenKind::Number, text.substr(start, i - start), start, i});
            continue;
        }
        bool matched = false;
        for (auto sym : kMultiCharSymbols) {
            if (text.compare(i, sym.size(), sym) == 0) {
                tokens.push_back({TokenKind::Symbol, std::string(sym), i, i + sym.size()});
                i += sym.size();
                matched = true;
                break;
            }
        }
        if (!matched) {
            tokens.push_back({TokenKind::Symbol, std::string(1, c), i, i + 1});
            ++i;
        }
    }
    return tokens;
}

bool is_keyword(std::string_view word)
{
    static const std::set<std::string_view> keywords = {
        "module", "endmodule", "input", "output", "inout", "wire", "reg", "logic", "integer", "genvar",
        "parameter", "localparam", "assign", "always", "always_ff", "always_comb", "always_latch",
        "initial", "begin", "end", "if", "else", "case", "casez", "casex", "endcase", "default", "for",
        "while", "repeat", "forever", "posedge", "negedge", "or", "and", "not", "signed", "unsigned",
        "generate", "endgenerate", "function", "endfunction", "task", "endtask", "fork", "join", "bit",
        "int", "real", "tri", "macromodule"};
    return keywords.count(word) > 0;
}

bool is_always_keyword(std::string_view word)
{
    return word == "always" || word == "always_ff" || word == "always_comb" || word == "always_latch";
}

int Port::width() const
{
    if (!has_range)
        return 1;
    if (!msb || !lsb)
        return 0;
    return std::abs(*msb - *lsb) + 1;
}

std::vector<std::string> Port::bit_names() const
{
    if (!has_range)
        return {name};
    std::vector<std::string> bits;
    if (!msb || !lsb)
        return bits;
    int step = *msb >= *lsb ? -1 : 1;
    for (int b = *msb;; b += step) {
        bits.push_back(name + "[" + std::to_string(b) + "]");
        if (b == *lsb)
            break;
    }
    return bits;
}

const Port *ModuleHeader::find(std::string_view port_name) const
{
    for (const auto &p : ports)
        if (p.name == port_name)
            return &p;
    return nullptr;
}

std::vector<std::string> ModuleHeader::input_bits() const
{
    std::vector<std::string> bits;
    for (const auto &p : ports)
        if (p.direction == Direction::Input)
            for (auto &b : p.bit_names())
                bits.push_back(std::move(b));
    return bits;
}

std::vector<std::string> ModuleHeader::output_bits() const
{
    std::vector<std::string> bits;
    for (const auto &p : ports)
        if (p.direction == Direction::Output)
            for (auto &b : p.bit_names())
                bits.push_back(std::move(b));
    return bits;
}

ModuleHeader parse_module_header(std::string_view src)
{
    auto tokens = tokenize(src);
    std::size_t i = 0;
    while (i < tokens.size() && !is_word(tokens[i], "module") && !is_word(tokens[i], "macromodule"))
        ++i;
    if (i >= tokens.size())
        throw InputError("no module declaration found");

    ModuleHeader header;
    std::size_t module_pos = i;
    ++i;
    if (i < tokens.size() && tokens[i].kind == TokenKind::Identifier)
        header.name = tokens[i++].text;

    // The declaration ends at the first ';' outside parentheses.
    std::size_t decl_end = tokens.size();
    int depth = 0;
    for (std::size_t j = i; j < tokens.size(); ++j) {
        if (is_symbol(tokens[j], "("))
            ++depth;
        else if (is_symbol(tokens[j], ")"))
            --depth;
        else if (is_symbol(tokens[j], ";") && depth <= 0) {
            decl_end = j;
            break;
        }
    }
    if (decl_end < tokens.size())
        header.text = std::string(src.substr(tokens[module_pos].begin, tokens[decl_end].end - tokens[module_pos].begin));
    else
        header.text = std::string(src.substr(tokens[module_pos].begin)) + ";";

    std::size_t scan_end = tokens.size();
    for (std::size_t j = i; j < tokens.size(); ++j)
        if (is_word(tokens[j], "endmodule")) {
            scan_end = j;
            break;
        }

    for (std::size_t j = i; j < scan_end; ++j) {
        if (is_symbol(tokens[j], "#") && j + 1 < scan_end && is_symbol(tokens[j + 1], "(")) {
            j = match_bracket(tokens, j + 1);
            continue;
        }
        Direction dir;
        if (is_word(tokens[j], "input"))
            dir = Direction::Input;
        else if (is_word(tokens[j], "output"))
            dir = Direction::Output;
        else if (is_word(tokens[j], "inout"))
            dir = Direction::Inout;
        else
            continue;

        Port proto;
        proto.direction = dir;
        std::size_t k = j + 1;
        for (; k < scan_end; ++k) {
            const auto &t = tokens[k];
            if (is_word(t, "reg") || is_word(t, "logic")) {
                proto.is_reg = true;
            } else if (is_word(t, "wire") || is_word(t, "signed") || is_word(t, "unsigned") || is_word(t, "var")) {
            } else if (is_symbol(t, "[")) {
                std::size_t close = match_bracket(tokens, k);
                proto.has_range = true;
                std::size_t colon = k;
                for (std::size_t m = k + 1; m < close; ++m)
                    if (is_symbol(tokens[m], ":"))
                        colon = m;
                if (colon == k + 2 && close == colon + 2 && tokens[k + 1].kind == TokenKind::Number
                    && tokens[colon + 1].kind == TokenKind::Number) {
                    proto.msb = parse_int(tokens[k + 1].text);
                    proto.lsb = parse_int(tokens[colon + 1].text);
                }
                k = close;
            } else {
                break;
            }
        }
        // identifiers separated by commas until a terminator or the next direction
        for (; k < scan_end; ++k) {
            const auto &t = tokens[k];
            if (t.kind == TokenKind::Identifier && !is_keyword(t.text)) {
                Port p = proto;
                p.name = t.text;
                if (!header.find(p.name))
                    header.ports.push_back(std::move(p));
                if (k + 1 < scan_end && is_symbol(tokens[k + 1], "["))
                    k = match_bracket(tokens, k + 1);
                continue;
            }
            if (is_symbol(t, ","))
                continue;
            if (is_symbol(t, "=")) {
                // default value; skip to the next comma or terminator
                while (k + 1 < scan_end && !is_symbol(tokens[k + 1], ",") && !is_symbol(tokens[k + 1], ")")
                       && !is_symbol(tokens[k + 1], ";"))
                    ++k;
                continue;
            }
            break;
        }
        j = k - 1;
    }
    return header;
}

std::string_view base_name(std::string_view signal)
{
    auto bracket = signal.find('[');
    std::string_view base = bracket == std::string_view::npos ? signal : signal.substr(0, bracket);
    while (!base.empty() && std::isspace(static_cast<unsigned char>(base.back())))
        base.remove_suffix(1);
    return base;
}

std::vector<std::string> extract_code_blocks(std::string_view text)
{
    std::vector<std::string> blocks;
    bool in_fence = false;
    std::string current;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        std::string_view trimmed = line;
        while (!trimmed.empty() && (trimmed.front() == ' ' || trimmed.front() == '\t'))
            trimmed.remove_prefix(1);
        bool fence = trimmed.substr(0, 3) == "```";
        if (fence) {
            if (in_fence) {
                blocks.push_back(current);
                current.clear();
            }
            in_fence = !in_fence;
        } else if (in_fence) {
            current.append(line);
            current.push_back('\n');
        }
        if (eol == text.size())
            break;
        pos = eol + 1;
    }
    if (in_fence)
        blocks.push_back(current);

    for (auto &b : blocks) {
        while (!b.empty() && (b.back() == '\n' || b.back() == '\r'))
            b.pop_back();
    }
    if (!blocks.empty() || in_fence)
        return blocks;
    return bare_code_regions(text);
}

std::vector<std::string> bare_code_regions(std::string_view text)
{
    auto tokens = tokenize(text);
    std::vector<std::string> regions;
    std::size_t i = 0;
    while (i < tokens.size()) {
        const auto &t = tokens[i];
        if (is_word(t, "module") || is_word(t, "macromodule")) {
            std::size_t j = i + 1;
            while (j < tokens.size() && !is_word(tokens[j], "endmodule"))
                ++j;
            std::size_t end = j < tokens.size() ? tokens[j].end : text.size();
            regions.emplace_back(text.substr(t.begin, end - t.begin));
            i = j + 1;
            continue;
        }
        if (t.kind == TokenKind::Identifier && is_always_keyword(t.text)) {
            std::size_t body = skip_event_control(tokens, i + 1);
            if (body >= tokens.size()) {
                regions.emplace_back(text.substr(t.begin));
                break;
            }
            std::size_t last = statement_end(tokens, body);
            regions.emplace_back(text.substr(t.begin, tokens[last].end - t.begin));
            i = last + 1;
            continue;
        }
        ++i;
    }
    return regions;
}

std::vector<std::string> always_regions(std::string_view src)
{
    auto tokens = tokenize(src);
    std::vector<std::string> regions;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const auto &t = tokens[i];
        if (t.kind != TokenKind::Identifier || !is_always_keyword(t.text))
            continue;
        std::size_t body = skip_event_control(tokens, i + 1);
        if (body >= tokens.size()) {
            regions.emplace_back(src.substr(t.begin));
            break;
        }
        std::size_t last = statement_end(tokens, body);
        regions.emplace_back(src.substr(t.begin, tokens[last].end - t.begin));
        i = last;
    }
    return regions;
}

int count_always(std::string_view src)
{
    int count = 0;
    for (const auto &t : tokenize(src))
        if (t.kind == TokenKind::Identifier && is_always_keyword(t.text))
            ++count;
    return count;
}

bool contains_keyword(std::string_view src, std::string_view keyword)
{
    for (const auto &t : tokenize(src))
        if (t.kind == TokenKind::Identifier && t.text == keyword)
            return true;
    return false;
}

std::string remove_whitespace(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            out.push_back(c);
    return out;
}

bool contains_ignoring_whitespace(std::string_view haystack, std::string_view needle)
{
    return remove_whitespace(haystack).find(remove_whitespace(needle)) != std::string::npos;
}

bool has_balanced_module(std::string_view src)
{
    int depth = 0;
    bool seen = false;
    for (const auto &t : tokenize(src)) {
        if (is_word(t, "module") || is_word(t, "macromodule")) {
            ++depth;
            seen = true;
        } else if (is_word(t, "endmodule")) {
            if (--depth < 0)
                return false;
        }
    }
    return seen && depth == 0;
}

InferredDeclarations infer_declarations(
    const ModuleHeader &header, const std::vector<std::string> &snippets, const std::vector<std::string> &state_names)
{
    std::set<std::string> declared;
    std::map<std::string, int> widths; // known widths
    for (const auto &p : header.ports) {
        declared.insert(p.name);
        if (p.width() > 0)
            widths[p.name] = p.width();
    }

    std::vector<std::string> order; // first-assignment order
    std::map<std::string, Decl> found;
    std::set<std::string> loop_vars;
    std::map<std::string, int> max_index;
    std::set<std::string> used_idents;
    std::vector<std::string> procedural_outputs;

    struct Assignment {
        std::string lhs;
        std::vector<Token> rhs;
    };
    std::vector<Assignment> assignments;

    auto note = [&](const std::string &name, const std::string &kind) {
        if (declared.count(name) || is_keyword(name))
            return;
        auto [it, inserted] = found.try_emplace(name, Decl{name, kind});
        if (inserted)
            order.push_back(name);
        else if (kind == "reg" && it->second.kind == "wire")
            it->second.kind = "reg";
    };

    for (const auto &snippet : snippets) {
        auto tokens = tokenize(snippet);

        // local declarations
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (tokens[i].kind != TokenKind::Identifier || !kDeclKeywords.count(tokens[i].text))
                continue;
            int depth = 0;
            bool expect_name = true;
            std::size_t j = i + 1;
            for (; j < tokens.size() && !is_symbol(tokens[j], ";"); ++j) {
                const auto &t = tokens[j];
                if (is_symbol(t, "[") || is_symbol(t, "(") || is_symbol(t, "{"))
                    ++depth;
                else if (is_symbol(t, "]") || is_symbol(t, ")") || is_symbol(t, "}"))
                    --depth;
                else if (depth == 0 && is_symbol(t, ","))
                    expect_name = true;
                else if (depth == 0 && is_symbol(t, "="))
                    expect_name = false;
                else if (depth == 0 && expect_name && t.kind == TokenKind::Identifier && !is_keyword(t.text)) {
                    declared.insert(t.text);
                    expect_name = false;
                }
            }
            i = j;
        }

        for (std::size_t i = 0; i < tokens.size(); ++i) {
            const auto &t = tokens[i];
            if (t.kind != TokenKind::Identifier)
                continue;
            if (!is_keyword(t.text))
                used_idents.insert(t.text);

            // bit-select usage bounds widths from below
            if (!is_keyword(t.text) && i + 2 < tokens.size() && is_symbol(tokens[i + 1], "[")) {
                std::size_t close = match_bracket(tokens, i + 1);
                for (std::size_t m = i + 2; m < close; ++m) {
                    if (tokens[m].kind == TokenKind::Number && (is_symbol(tokens[m - 1], "[") || is_symbol(tokens[m - 1], ":"))
                        && m + 1 <= close && (is_symbol(tokens[m + 1], "]") || is_symbol(tokens[m + 1], ":"))) {
                        if (auto v = parse_int(tokens[m].text))
                            max_index[t.text] = std::max(max_index[t.text], *v);
                    }
                }
            }

            if (is_word(t, "for") && i + 3 < tokens.size() && is_symbol(tokens[i + 1], "(")
                && tokens[i + 2].kind == TokenKind::Identifier && is_symbol(tokens[i + 3], "=")) {
                loop_vars.insert(tokens[i + 2].text);
                continue;
            }

            if (is_word(t, "assign") && i + 1 < tokens.size() && tokens[i + 1].kind == TokenKind::Identifier) {
                std::size_t k = i + 2;
                if (k < tokens.size() && is_symbol(tokens[k], "["))
                    k = match_bracket(tokens, k) + 1;
                if (k < tokens.size() && is_symbol(tokens[k], "=")) {
                    Assignment a{tokens[i + 1].text, {}};
                    std::size_t end = k + 1;
                    while (end < tokens.size() && !is_symbol(tokens[end], ";"))
                        a.rhs.push_back(tokens[end++]);
                    note(a.lhs, "wire");
                    if (k == i + 2)
                        assignments.push_back(std::move(a));
                }
                continue;
            }

            if (is_keyword(t.text) || i == 0)
                continue;
            const auto &prev = tokens[i - 1];
            bool statement_start = is_symbol(prev, ";") || is_word(prev, "begin") || is_word(prev, "end")
                                   || is_symbol(prev, ")") || is_word(prev, "else") || is_symbol(prev, ":")
                                   || is_symbol(prev, "*") || is_word(prev, "endcase") || is_word(prev, "default");
            if (!statement_start)
                continue;
            std::size_t k = i + 1;
            bool indexed = false;
            if (k < tokens.size() && is_symbol(tokens[k], "[")) {
                k = match_bracket(tokens, k) + 1;
                indexed = true;
            }
            if (k < tokens.size() && (is_symbol(tokens[k], "=") || is_symbol(tokens[k], "<="))) {
                if (loop_vars.count(t.text))
                    continue;
                note(t.text, "reg");
                if (const Port *p = header.find(t.text);
                    p && p->direction == Direction::Output && !p->is_reg
                    && std::find(procedural_outputs.begin(), procedural_outputs.end(), t.text) == procedural_outputs.end())
                    procedural_outputs.push_back(t.text);
                if (!indexed) {
                    Assignment a{t.text, {}};
                    std::size_t end = k + 1;
                    while (end < tokens.size() && !is_symbol(tokens[end], ";"))
                        a.rhs.push_back(tokens[end++]);
                    assignments.push_back(std::move(a));
                }
            }
        }
    }

    // State names used by the code become localparams.
    std::vector<std::string> params;
    bool any_state_used = false;
    for (const auto &s : state_names)
        if (used_idents.count(s) && !declared.count(s) && !found.count(s))
            any_state_used = true;
    if (any_state_used)
        for (const auto &s : state_names)
            if (!declared.count(s) && !found.count(s) && std::find(params.begin(), params.end(), s) == params.end())
                params.push_back(s);
    int param_width = 1;
    while ((1u << param_width) < params.size())
        ++param_width;
    for (const auto &p : params)
        widths[p] = param_width;

    // Width of a single operand: identifier, sized literal, bit or part select.
    auto operand_width = [&](const std::vector<Token> &item) -> std::optional<int> {
        if (item.size() == 1) {
            if (item[0].kind == TokenKind::Identifier) {
                if (auto it = widths.find(item[0].text); it != widths.end())
                    return it->second;
                return std::nullopt;
            }
            if (item[0].kind == TokenKind::Number)
                return literal_width(item[0].text);
            return std::nullopt;
        }
        if (item.size() == 4 && item[0].kind == TokenKind::Identifier && is_symbol(item[1], "[")
            && is_symbol(item[3], "]"))
            return 1;
        if (item.size() == 6 && item[0].kind == TokenKind::Identifier && is_symbol(item[1], "[")
            && is_symbol(item[3], ":") && is_symbol(item[5], "]")) {
            auto h = parse_int(item[2].text), l = parse_int(item[4].text);
            if (h && l)
                return std::abs(*h - *l) + 1;
        }
        return std::nullopt;
    };

    std::function<std::optional<int>(const std::vector<Token> &)> rhs_width;
    rhs_width = [&](const std::vector<Token> &rhs) -> std::optional<int> {
        // conditional: widest of the two branches
        {
            int depth = 0;
            std::size_t question = rhs.size(), colon = rhs.size();
            int nested = 0;
            for (std::size_t k = 0; k < rhs.size(); ++k) {
                if (is_symbol(rhs[k], "[") || is_symbol(rhs[k], "{") || is_symbol(rhs[k], "("))
                    ++depth;
                else if (is_symbol(rhs[k], "]") || is_symbol(rhs[k], "}") || is_symbol(rhs[k], ")"))
                    --depth;
                else if (depth == 0 && is_symbol(rhs[k], "?")) {
                    if (question == rhs.size())
                        question = k;
                    else
                        ++nested;
                } else if (depth == 0 && is_symbol(rhs[k], ":") && question < k) {
                    if (nested > 0)
                        --nested;
                    else if (colon == rhs.size())
                        colon = k;
                }
            }
            if (question < colon && colon < rhs.size()) {
                auto a = rhs_width({rhs.begin() + static_cast<long>(question) + 1, rhs.begin() + static_cast<long>(colon)});
                auto b = rhs_width({rhs.begin() + static_cast<long>(colon) + 1, rhs.end()});
                if (a && b)
                    return std::max(*a, *b);
                return a ? a : b;
            }
        }
        if (rhs.size() >= 3 && is_symbol(rhs.front(), "(") && is_symbol(rhs.back(), ")")
            && match_bracket(rhs, 0) == rhs.size() - 1)
            return rhs_width({rhs.begin() + 1, rhs.end() - 1});
        if (rhs.size() < 3 || !is_symbol(rhs.front(), "{") || !is_symbol(rhs.back(), "}"))
            return operand_width(rhs);
        // concatenation: sum of the items' widths
        int total = 0;
        std::size_t k = 1;
        while (k + 1 < rhs.size()) {
            std::size_t e = k;
            int depth = 0;
            while (e + 1 < rhs.size()) {
                if (is_symbol(rhs[e], "[") || is_symbol(rhs[e], "{") || is_symbol(rhs[e], "("))
                    ++depth;
                else if (is_symbol(rhs[e], "]") || is_symbol(rhs[e], "}") || is_symbol(rhs[e], ")"))
                    --depth;
                else if (depth == 0 && is_symbol(rhs[e], ","))
                    break;
                ++e;
            }
            auto w = operand_width({rhs.begin() + static_cast<long>(k), rhs.begin() + static_cast<long>(e)});
            if (!w)
                return std::nullopt;
            total += *w;
            k = e + 1;
        }
        return total > 0 ? std::optional<int>(total) : std::nullopt;
    };

    for (auto &[name, idx] : max_index)
        if (found.count(name))
            widths[name] = std::max(widths.count(name) ? widths[name] : 1, idx + 1);

    for (std::size_t round = 0; round < found.size() + 2; ++round) {
        bool changed = false;
        for (const auto &a : assignments) {
            if (!found.count(a.lhs))
                continue;
            auto w = rhs_width(a.rhs);
            if (!w)
                continue;
            int current = widths.count(a.lhs) ? widths[a.lhs] : 0;
            if (*w > current) {
                widths[a.lhs] = *w;
                changed = true;
            }
        }
        if (!changed)
            break;
    }

    InferredDeclarations result;
    for (std::size_t i = 0; i < params.size(); ++i) {
        std::string range = param_width > 1 ? "[" + std::to_string(param_width - 1) + ":0] " : "";
        result.lines.push_back("localparam " + range + params[i] + " = " + std::to_string(param_width) + "'d"
                               + std::to_string(i) + ";");
    }
    for (const auto &name : order) {
        const auto &d = found.at(name);
        int w = widths.count(name) ? widths[name] : 1;
        std::string range = w > 1 ? "[" + std::to_string(w - 1) + ":0] " : "";
        result.lines.push_back(d.kind + " " + range + name + ";");
    }
    for (const auto &v : loop_vars)
        if (!declared.count(v) && !found.count(v))
            result.lines.push_back("integer " + v + ";");
    result.outputs_needing_reg = std::move(procedural_outputs);
    return result;
}

namespace {

std::string rewrite_output_decls(const ModuleHeader &header, const std::vector<std::string> &outputs, bool make_reg)
{
    std::string text = header.text;
    auto tokens = tokenize(text);
    // Collect edits as (offset, erase length, insertion) and apply back to front.
    struct Edit {
        std::size_t pos;
        std::size_t erase;
        std::string insert;
    };
    std::vector<Edit> edits;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (!is_word(tokens[i], "output"))
            continue;
        std::size_t k = i + 1;
        std::optional<std::size_t> reg_tok, wire_tok;
        for (; k < tokens.size(); ++k) {
            if (is_word(tokens[k], "reg"))
                reg_tok = k;
            else if (is_word(tokens[k], "wire"))
                wire_tok = k;
            else if (is_word(tokens[k], "signed") || is_word(tokens[k], "unsigned") || is_word(tokens[k], "logic"))
                ;
            else if (is_symbol(tokens[k], "["))
                k = match_bracket(tokens, k);
            else
                break;
        }
        bool hit = false;
        for (std::size_t m = k; m < tokens.size(); ++m) {
            if (tokens[m].kind == TokenKind::Identifier && !is_keyword(tokens[m].text)) {
                if (std::find(outputs.begin(), outputs.end(), tokens[m].text) != outputs.end())
                    hit = true;
                continue;
            }
            if (is_symbol(tokens[m], ","))
                continue;
            if (is_symbol(tokens[m], "["))
                m = match_bracket(tokens, m);
            else
                break;
        }
        if (!hit)
            continue;
        if (make_reg && !reg_tok) {
            if (wire_tok)
                edits.push_back({tokens[*wire_tok].begin, 4, "reg"});
            else
                edits.push_back({tokens[i].end, 0, " reg"});
        } else if (!make_reg && reg_tok) {
            std::size_t end = tokens[*reg_tok].end;
            while (end < text.size() && (text[end] == ' ' || text[end] == '\t'))
                ++end;
            edits.push_back({tokens[*reg_tok].begin, end - tokens[*reg_tok].begin, ""});
        }
    }
    std::sort(edits.begin(), edits.end(), [](const Edit &a, const Edit &b) { return a.pos > b.pos; });
    for (const auto &e : edits)
        text.replace(e.pos, e.erase, e.insert);
    return text;
}

} // namespace

std::string header_with_reg_outputs(const ModuleHeader &header, const std::vector<std::string> &outputs)
{
    return rewrite_output_decls(header, outputs, true);
}

std::string header_without_reg_outputs(const ModuleHeader &header, const std::vector<std::string> &outputs)
{
    return rewrite_output_decls(header, outputs, false);
}

} // namespace hdlgen::verilog
