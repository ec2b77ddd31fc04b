// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

// Lexical helpers over Verilog text. Nothing here parses Verilog properly;
// everything works on a token stream so it tolerates the half-broken code
// LLMs tend to return.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdlgen::verilog {

enum class TokenKind { Identifier, Number, Symbol };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t begin; ///< byte offset into the source
    std::size_t end;
};

/// Replaces comments and string literals with spaces, preserving offsets and newlines.
std::string strip_comments_and_strings(std::string_view src);

/// Tokenizes `src` after stripping comments and strings.
std::vector<Token> tokenize(std::string_view src);

bool is_keyword(std::string_view word);
bool is_always_keyword(std::string_view word);

enum class Direction { Input, Output, Inout };

struct Port {
    std::string name;
    Direction direction = Direction::Input;
    bool is_reg = false;
    /// Numeric [msb:lsb]; empty for scalars or non-constant ranges.
    std::optional<int> msb;
    std::optional<int> lsb;
    bool has_range = false;

    int width() const;
    /// Bit names as truth-table columns spell them: "a" or "a[3]", "a[2]", ...
    std::vector<std::string> bit_names() const;
};

struct ModuleHeader {
    std::string name;
    std::vector<Port> ports;
    /// `module ... ;` prefix of the source text.
    std::string text;

    const Port *find(std::string_view port_name) const;
    std::vector<std::string> input_bits() const;
    std::vector<std::string> output_bits() const;
};

/// Parses the `module name (...);` declaration at the start of `src`
/// (ANSI port lists and body-level input/output declarations both work).
/// Throws InputError when no module keyword is found.
ModuleHeader parse_module_header(std::string_view src);

/// Strips a trailing "[n]" / "[h:l]" select: "a[3]" -> "a".
std::string_view base_name(std::string_view signal);

/// Contents of ``` fenced regions in order. An unterminated fence runs to the
/// end of the text. With no fences at all, falls back to bare_code_regions.
std::vector<std::string> extract_code_blocks(std::string_view text);

/// Maximal `module ... endmodule` and `always ...` regions found by scanning
/// tokens, at nesting depth zero. Offsets refer to `text`, comments included.
std::vector<std::string> bare_code_regions(std::string_view text);

/// Every `always ...` statement in `src`, including those nested inside modules.
std::vector<std::string> always_regions(std::string_view src);

/// Number of always / always_ff / always_comb / always_latch keywords.
int count_always(std::string_view src);

bool contains_keyword(std::string_view src, std::string_view keyword);

/// Whitespace-insensitive containment test.
bool contains_ignoring_whitespace(std::string_view haystack, std::string_view needle);

std::string remove_whitespace(std::string_view text);

/// Result of scanning generated code for identifiers it needs declared.
struct InferredDeclarations {
    /// Ready-to-emit declaration lines without indentation, e.g. "reg [7:0] Q;".
    std::vector<std::string> lines;
    /// Output ports driven from always blocks that the header does not declare as reg.
    std::vector<std::string> outputs_needing_reg;
};

/// Finds identifiers assigned in `snippets` but declared neither in the header
/// nor in the snippets, infers register/wire widths from bit selects and simple
/// assignments, and declares any `state_names` the code uses as localparams.
InferredDeclarations infer_declarations(
    const ModuleHeader &header,
    const std::vector<std::string> &snippets,
    const std::vector<std::string> &state_names = {});

/// Header text with the listed output ports turned into `output reg`.
std::string header_with_reg_outputs(const ModuleHeader &header, const std::vector<std::string> &outputs);

/// Header text with `reg` removed from the listed output ports.
std::string header_without_reg_outputs(const ModuleHeader &header, const std::vector<std::string> &outputs);

/// True when `src` holds a `module` with a matching `endmodule`.
bool has_balanced_module(std::string_view src);

} // namespace hdlgen::verilog
