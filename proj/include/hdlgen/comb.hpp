// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include "hdlgen/core.hpp"
#include "hdlgen/prompts.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdlgen {

enum class Cell : std::uint8_t { Zero, One, DontCare };

/// Tabular Boolean function. Each row holds |inputs| input cells followed by
/// |outputs| output cells; only output cells may be DontCare.
struct TruthTable {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> header_inputs;
    std::vector<std::string> header_outputs;

    /// Throws FormatError (stage "truth-table") naming the offending row/column.
    void validate() const;

    /// Throws UnknownOutput.
    std::size_t output_index(std::string_view name) const;
};

/// Builds a table from the JSON schema {table, inputs, outputs[, header_inputs, header_outputs]}.
/// Output cells accept 0/1, "0"/"1", true/false, and "x"/"X"/null for don't-care.
TruthTable parse_truth_table(const nlohmann::json &doc);

/// First JSON object embedded in free text, with light repair of missing and
/// trailing commas. Throws FormatError when none parses.
nlohmann::json extract_first_json_object(std::string_view text);

nlohmann::json truth_table_to_json(const TruthTable &table);

struct Literal {
    std::string input;
    bool negated = false;

    friend bool operator==(const Literal &, const Literal &) = default;
    friend auto operator<=>(const Literal &, const Literal &) = default;
};

using Product = std::vector<Literal>;

/// Sum of products for one output; `constant` is set instead of terms for 0/1.
struct SopExpression {
    std::string output;
    std::vector<Product> terms;
    std::optional<bool> constant;

    /// "out = a & ~b | c", or "out = 0".
    std::string to_string() const;
};

/// Above this many candidate primes the cover is chosen greedily.
inline constexpr std::size_t kPetrickPrimeLimit = 24;
/// Widest table minimize accepts (missing rows are enumerated as don't-cares).
inline constexpr std::size_t kMaxMinimizeInputs = 16;

/// Two-level minimization of one output: Quine–McCluskey prime generation over
/// the on-set plus don't-cares (rows absent from the table count as don't-cares),
/// essential primes first, then Petrick's method for the remaining cover, or
/// a greedy cover when more than kPetrickPrimeLimit primes remain.
/// Throws UnknownOutput, or ContractViolation for more than kMaxMinimizeInputs inputs.
SopExpression minimize(const TruthTable &table, std::string_view output_name);

/// Throws MissingInput when a referenced input is unbound.
bool evaluate_sop(const SopExpression &expr, const std::map<std::string, bool> &assignment);

/// Module text: the header, one `assign` per output bit in declaration order,
/// `endmodule`. Throws PortMismatch when outputs or literals do not match the header.
std::string emit_verilog(std::string_view module_header, const std::vector<SopExpression> &exprs);

/// "module top_module(input a, input [2:1] b, output out);" built from table column names.
std::string synthesize_header(const TruthTable &table, std::string_view module_name = "top_module");

/// Asks the backend for a JSON truth table derived from the information list.
TruthTable request_truth_table(const InformationList &info_list, const Task &task, const LlmSession &session);

/// Full COMB procedure for one information list: table, per-output minimization, emission.
/// Table/header disagreements surface as FormatError.
std::string run_comb(const InformationList &info_list, const Task &task, const LlmSession &session);

} // namespace hdlgen
