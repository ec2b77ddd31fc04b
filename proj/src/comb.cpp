// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/comb.hpp"

#include "hdlgen/errors.hpp"
#include "hdlgen/verilog_text.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <regex>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace hdlgen {
namespace {

using json = nlohmann::json;

constexpr const char *kStage = "truth-table";

std::string position(std::size_t row, std::optional<std::size_t> column = std::nullopt)
{
    std::string s = "row " + std::to_string(row + 1);
    if (column)
        s += ", column " + std::to_string(*column + 1);
    return s;
}

std::vector<std::string> name_list(const json &doc, const char *key, bool required)
{
    if (!doc.contains(key)) {
        if (required)
            throw FormatError(kStage, std::string("missing required key '") + key + "'");
        return {};
    }
    const auto &arr = doc[key];
    if (!arr.is_array())
        throw FormatError(kStage, std::string("'") + key + "' must be an array of names");
    std::vector<std::string> names;
    for (const auto &n : arr) {
        if (!n.is_string())
            throw FormatError(kStage, std::string("'") + key + "' must contain only strings");
        names.push_back(verilog::remove_whitespace(n.get<std::string>()));
    }
    return names;
}

std::optional<Cell> to_cell(const json &v)
{
    if (v.is_null())
        return Cell::DontCare;
    if (v.is_boolean())
        return v.get<bool>() ? Cell::One : Cell::Zero;
    if (v.is_number_integer() || v.is_number_unsigned()) {
        auto i = v.get<long long>();
        if (i == 0)
            return Cell::Zero;
        if (i == 1)
            return Cell::One;
        return std::nullopt;
    }
    if (v.is_string()) {
        auto s = v.get<std::string>();
        if (s == "0")
            return Cell::Zero;
        if (s == "1")
            return Cell::One;
        if (s == "x" || s == "X")
            return Cell::DontCare;
    }
    return std::nullopt;
}

/// A product term over v variables: bits in `dashes` are free, the rest must equal `value`.
/// Input column i maps to bit (v - 1 - i) so minterm numbers read like table rows.
struct Cube {
    std::uint32_t value = 0;
    std::uint32_t dashes = 0;

    bool covers(std::uint32_t minterm) const { return (minterm & ~dashes) == value; }
    friend bool operator==(const Cube &, const Cube &) = default;
};

Product cube_to_product(const Cube &c, const std::vector<std::string> &inputs)
{
    const std::size_t v = inputs.size();
    Product p;
    for (std::size_t i = 0; i < v; ++i) {
        std::uint32_t bit = 1u << (v - 1 - i);
        if (c.dashes & bit)
            continue;
        p.push_back({inputs[i], (c.value & bit) == 0});
    }
    return p;
}

std::vector<Cube> prime_implicants(const std::vector<std::uint32_t> &minterms, std::size_t v)
{
    // Level k holds cubes with k dashes, grouped by dash mask.
    std::map<std::uint32_t, std::unordered_set<std::uint32_t>> level;
    for (auto m : minterms)
        level[0].insert(m);

    std::vector<Cube> primes;
    while (!level.empty()) {
        std::map<std::uint32_t, std::unordered_set<std::uint32_t>> next;
        for (const auto &[dashes, values] : level) {
            std::unordered_set<std::uint32_t> combined;
            for (auto x : values) {
                for (std::size_t b = 0; b < v; ++b) {
                    std::uint32_t bit = 1u << b;
                    if ((dashes & bit) || (x & bit))
                        continue;
                    if (values.count(x | bit)) {
                        next[dashes | bit].insert(x);
                        combined.insert(x);
                        combined.insert(x | bit);
                    }
                }
            }
            for (auto x : values)
                if (!combined.count(x))
                    primes.push_back({x, dashes});
        }
        level = std::move(next);
    }
    return primes;
}

int literal_count(const Cube &c, std::size_t v)
{
    return static_cast<int>(v) - std::popcount(c.dashes);
}

/// Orders cubes by their product text so greedy ties and final output are stable.
bool product_less(const Cube &a, const Cube &b, const std::vector<std::string> &inputs)
{
    return cube_to_product(a, inputs) < cube_to_product(b, inputs);
}

std::vector<std::size_t> greedy_cover(
    const std::vector<Cube> &primes, std::vector<std::uint32_t> uncovered, const std::vector<std::string> &inputs)
{
    std::vector<std::size_t> chosen;
    while (!uncovered.empty()) {
        std::size_t best = primes.size();
        std::size_t best_count = 0;
        for (std::size_t p = 0; p < primes.size(); ++p) {
            std::size_t count = 0;
            for (auto m : uncovered)
                count += primes[p].covers(m) ? 1 : 0;
            if (count == 0)
                continue;
            if (count > best_count || (count == best_count && product_less(primes[p], primes[best], inputs))) {
                best = p;
                best_count = count;
            }
        }
        chosen.push_back(best);
        std::erase_if(uncovered, [&](std::uint32_t m) { return primes[best].covers(m); });
    }
    return chosen;
}

/// Petrick's method: multiply out the product-of-sums over prime choices with
/// absorption, then keep the cheapest product. Returns nullopt when the
/// expansion grows past a fixed size.
std::optional<std::vector<std::size_t>> petrick_cover(
    const std::vector<Cube> &primes, const std::vector<std::uint32_t> &uncovered, const std::vector<std::string> &inputs)
{
    constexpr std::size_t kExpansionLimit = 200'000;
    std::set<std::uint32_t> clauses;
    for (auto m : uncovered) {
        std::uint32_t clause = 0;
        for (std::size_t p = 0; p < primes.size(); ++p)
            if (primes[p].covers(m))
                clause |= 1u << p;
        clauses.insert(clause);
    }

    std::vector<std::uint32_t> terms{0};
    for (auto clause : clauses) {
        std::vector<std::uint32_t> expanded;
        for (auto t : terms) {
            if (t & clause) {
                expanded.push_back(t);
                continue;
            }
            for (std::uint32_t rest = clause; rest; rest &= rest - 1)
                expanded.push_back(t | (rest & (~rest + 1)));
        }
        std::sort(expanded.begin(), expanded.end(), [](std::uint32_t a, std::uint32_t b) {
            int pa = std::popcount(a), pb = std::popcount(b);
            return pa != pb ? pa < pb : a < b;
        });
        expanded.erase(std::unique(expanded.begin(), expanded.end()), expanded.end());
        // absorption: drop supersets of a smaller kept term
        std::vector<std::uint32_t> kept;
        for (auto t : expanded) {
            bool absorbed = false;
            for (auto k : kept)
                if ((k & t) == k) {
                    absorbed = true;
                    break;
                }
            if (!absorbed)
                kept.push_back(t);
        }
        if (kept.size() > kExpansionLimit)
            return std::nullopt;
        terms = std::move(kept);
    }

    const std::size_t v = inputs.size();
    auto cost = [&](std::uint32_t t) {
        int literals = 0;
        for (std::uint32_t r = t; r; r &= r - 1)
            literals += literal_count(primes[static_cast<std::size_t>(std::countr_zero(r))], v);
        return std::pair{std::popcount(t), literals};
    };
    auto as_products = [&](std::uint32_t t) {
        std::vector<Product> ps;
        for (std::uint32_t r = t; r; r &= r - 1)
            ps.push_back(cube_to_product(primes[static_cast<std::size_t>(std::countr_zero(r))], inputs));
        std::sort(ps.begin(), ps.end());
        return ps;
    };

    std::uint32_t best = terms.front();
    for (auto t : terms) {
        auto ct = cost(t), cb = cost(best);
        if (ct < cb || (ct == cb && as_products(t) < as_products(best)))
            best = t;
    }
    std::vector<std::size_t> chosen;
    for (std::uint32_t r = best; r; r &= r - 1)
        chosen.push_back(static_cast<std::size_t>(std::countr_zero(r)));
    return chosen;
}

std::string literal_text(const Literal &l)
{
    return (l.negated ? "~" : "") + l.input;
}

} // namespace

void TruthTable::validate() const
{
    auto check_names = [](const std::vector<std::string> &names, const char *what) {
        std::set<std::string> seen;
        for (const auto &n : names) {
            if (n.empty())
                throw FormatError(kStage, std::string("empty name in ") + what);
            if (!seen.insert(n).second)
                throw FormatError(kStage, std::string("duplicate name '") + n + "' in " + what);
        }
    };
    check_names(inputs, "inputs");
    check_names(outputs, "outputs");
    if (outputs.empty())
        throw FormatError(kStage, "no outputs declared");
    for (const auto &n : outputs)
        if (std::find(inputs.begin(), inputs.end(), n) != inputs.end())
            throw FormatError(kStage, "'" + n + "' is both an input and an output");

    auto check_permutation = [](std::vector<std::string> header, std::vector<std::string> columns, const char *what) {
        if (header.empty())
            return;
        std::sort(header.begin(), header.end());
        std::sort(columns.begin(), columns.end());
        if (header != columns)
            throw FormatError(kStage, std::string(what) + " is not a permutation of the column names");
    };
    check_permutation(header_inputs, inputs, "header_inputs");
    check_permutation(header_outputs, outputs, "header_outputs");

    const std::size_t width = inputs.size() + outputs.size();
    std::set<std::vector<Cell>> patterns;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto &row = rows[r];
        if (row.size() != width)
            throw FormatError(
                kStage,
                position(r) + ": has " + std::to_string(row.size()) + " cells, expected " + std::to_string(width));
        for (std::size_t c = 0; c < inputs.size(); ++c)
            if (row[c] == Cell::DontCare)
                throw FormatError(kStage, position(r, c) + ": don't-care in input column '" + inputs[c] + "'");
        std::vector<Cell> pattern(row.begin(), row.begin() + static_cast<long>(inputs.size()));
        if (!patterns.insert(pattern).second)
            throw FormatError(kStage, position(r) + ": duplicate input pattern");
    }
    if (rows.empty())
        throw FormatError(kStage, "table has no rows");
}

std::size_t TruthTable::output_index(std::string_view name) const
{
    for (std::size_t i = 0; i < outputs.size(); ++i)
        if (outputs[i] == name)
            return i;
    throw UnknownOutput(std::string(name));
}

TruthTable parse_truth_table(const json &doc)
{
    if (!doc.is_object())
        throw FormatError(kStage, "expected a JSON object");
    TruthTable table;
    table.inputs = name_list(doc, "inputs", true);
    table.outputs = name_list(doc, "outputs", true);
    table.header_inputs = name_list(doc, "header_inputs", false);
    table.header_outputs = name_list(doc, "header_outputs", false);
    if (!doc.contains("table"))
        throw FormatError(kStage, "missing required key 'table'");
    const auto &rows = doc["table"];
    if (!rows.is_array())
        throw FormatError(kStage, "'table' must be an array of rows");

    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!rows[r].is_array())
            throw FormatError(kStage, position(r) + ": expected an array of cells");
        std::vector<Cell> row;
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            auto cell = to_cell(rows[r][c]);
            if (!cell)
                throw FormatError(kStage, position(r, c) + ": unrecognized cell value " + rows[r][c].dump());
            row.push_back(*cell);
        }
        table.rows.push_back(std::move(row));
    }
    table.validate();
    return table;
}

json extract_first_json_object(std::string_view text)
{
    static const std::regex missing_comma(R"(([\]\}"0-9el])(\s*\n\s*)("))");
    static const std::regex trailing_comma(R"(,(\s*[\]\}]))");

    for (std::size_t start = text.find('{'); start != std::string_view::npos; start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        std::size_t end = std::string_view::npos;
        for (std::size_t i = start; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (c == '\\')
                    ++i;
                else if (c == '"')
                    in_string = false;
            } else if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}' && --depth == 0) {
                end = i;
                break;
            }
        }
        if (end == std::string_view::npos)
            continue;
        std::string candidate(text.substr(start, end - start + 1));
        auto doc = json::parse(candidate, nullptr, false);
        if (doc.is_discarded()) {
            std::string repaired = std::regex_replace(candidate, missing_comma, "$1,$2$3");
            repaired = std::regex_replace(repaired, trailing_comma, "$1");
            doc = json::parse(repaired, nullptr, false);
        }
        if (!doc.is_discarded() && doc.is_object())
            return doc;
    }
    throw FormatError(kStage, "no JSON object found in reply");
}

json truth_table_to_json(const TruthTable &table)
{
    json rows = json::array();
    for (const auto &row : table.rows) {
        json cells = json::array();
        for (auto c : row) {
            if (c == Cell::DontCare)
                cells.push_back("x");
            else
                cells.push_back(c == Cell::One ? 1 : 0);
        }
        rows.push_back(std::move(cells));
    }
    return json{
        {"table", std::move(rows)},
        {"inputs", table.inputs},
        {"outputs", table.outputs},
        {"header_inputs", table.header_inputs.empty() ? table.inputs : table.header_inputs},
        {"header_outputs", table.header_outputs.empty() ? table.outputs : table.header_outputs},
    };
}

std::string SopExpression::to_string() const
{
    std::string out = output + " = ";
    if (constant)
        return out + (*constant ? "1" : "0");
    for (std::size_t t = 0; t < terms.size(); ++t) {
        if (t)
            out += " | ";
        for (std::size_t l = 0; l < terms[t].size(); ++l) {
            if (l)
                out += " & ";
            out += literal_text(terms[t][l]);
        }
    }
    return out;
}

SopExpression minimize(const TruthTable &table, std::string_view output_name)
{
    const std::size_t out_col = table.inputs.size() + table.output_index(output_name);
    const std::size_t v = table.inputs.size();
    if (v > kMaxMinimizeInputs)
        throw ContractViolation("minimize supports at most " + std::to_string(kMaxMinimizeInputs) + " inputs");

    SopExpression expr;
    expr.output = std::string(output_name);

    std::vector<std::uint32_t> on;
    std::unordered_set<std::uint32_t> off;
    for (const auto &row : table.rows) {
        std::uint32_t m = 0;
        for (std::size_t i = 0; i < v; ++i)
            if (row[i] == Cell::One)
                m |= 1u << (v - 1 - i);
        if (row[out_col] == Cell::One)
            on.push_back(m);
        else if (row[out_col] == Cell::Zero)
            off.insert(m);
    }
    if (on.empty()) {
        expr.constant = false;
        return expr;
    }
    if (off.empty()) {
        expr.constant = true;
        return expr;
    }

    const std::uint32_t space = 1u << v;
    std::vector<std::uint32_t> care_or_free;
    care_or_free.reserve(space - off.size());
    for (std::uint32_t m = 0; m < space; ++m)
        if (!off.count(m))
            care_or_free.push_back(m);

    auto all_primes = prime_implicants(care_or_free, v);
    std::sort(on.begin(), on.end());
    std::vector<Cube> primes;
    for (const auto &p : all_primes)
        if (std::any_of(on.begin(), on.end(), [&](std::uint32_t m) { return p.covers(m); }))
            primes.push_back(p);
    std::sort(primes.begin(), primes.end(), [&](const Cube &a, const Cube &b) { return product_less(a, b, table.inputs); });

    std::vector<Cube> cover;
    std::vector<std::uint32_t> uncovered = on;
    // essential primes
    for (auto m : on) {
        std::size_t hits = 0, which = 0;
        for (std::size_t p = 0; p < primes.size(); ++p)
            if (primes[p].covers(m)) {
                ++hits;
                which = p;
            }
        if (hits == 1 && std::find(cover.begin(), cover.end(), primes[which]) == cover.end())
            cover.push_back(primes[which]);
    }
    std::erase_if(uncovered, [&](std::uint32_t m) {
        return std::any_of(cover.begin(), cover.end(), [&](const Cube &c) { return c.covers(m); });
    });

    if (!uncovered.empty()) {
        std::vector<Cube> candidates;
        for (const auto &p : primes)
            if (std::find(cover.begin(), cover.end(), p) == cover.end()
                && std::any_of(uncovered.begin(), uncovered.end(), [&](std::uint32_t m) { return p.covers(m); }))
                candidates.push_back(p);
        std::optional<std::vector<std::size_t>> chosen;
        if (candidates.size() <= kPetrickPrimeLimit)
            chosen = petrick_cover(candidates, uncovered, table.inputs);
        if (!chosen)
            chosen = greedy_cover(candidates, uncovered, table.inputs);
        for (auto idx : *chosen)
            cover.push_back(candidates[idx]);
    }

    for (const auto &c : cover)
        expr.terms.push_back(cube_to_product(c, table.inputs));
    std::sort(expr.terms.begin(), expr.terms.end());
    return expr;
}

bool evaluate_sop(const SopExpression &expr, const std::map<std::string, bool> &assignment)
{
    // Bind-check every literal first so a missing input is reported even when
    // short-circuiting would not reach it.
    for (const auto &term : expr.terms)
        for (const auto &lit : term)
            if (!assignment.count(lit.input))
                throw MissingInput(lit.input);
    if (expr.constant)
        return *expr.constant;
    for (const auto &term : expr.terms) {
        bool all = true;
        for (const auto &lit : term)
            all = all && (assignment.at(lit.input) != lit.negated);
        if (all)
            return true;
    }
    return false;
}

std::string emit_verilog(std::string_view module_header, const std::vector<SopExpression> &exprs)
{
    auto header = verilog::parse_module_header(module_header);
    auto output_bits = header.output_bits();
    auto input_bits = header.input_bits();
    std::set<std::string> inputs(input_bits.begin(), input_bits.end());

    std::vector<std::string> unmatched;
    std::map<std::string, const SopExpression *> by_output;
    for (const auto &e : exprs) {
        std::string name = verilog::remove_whitespace(e.output);
        if (std::find(output_bits.begin(), output_bits.end(), name) == output_bits.end()
            || !by_output.emplace(name, &e).second)
            unmatched.push_back(e.output);
        for (const auto &term : e.terms)
            for (const auto &lit : term)
                if (!inputs.count(verilog::remove_whitespace(lit.input))
                    && std::find(unmatched.begin(), unmatched.end(), lit.input) == unmatched.end())
                    unmatched.push_back(lit.input);
    }
    for (const auto &bit : output_bits)
        if (!by_output.count(bit))
            unmatched.push_back(bit);
    if (!unmatched.empty())
        throw PortMismatch(std::move(unmatched));

    std::vector<std::string> reg_outputs;
    for (const auto &p : header.ports)
        if (p.direction == verilog::Direction::Output && p.is_reg)
            reg_outputs.push_back(p.name);

    std::string out = verilog::header_without_reg_outputs(header, reg_outputs);
    out += '\n';
    for (const auto &bit : output_bits) {
        const SopExpression &e = *by_output.at(bit);
        out += "\tassign " + bit + " = ";
        if (e.constant) {
            out += *e.constant ? "1'b1" : "1'b0";
        } else {
            for (std::size_t t = 0; t < e.terms.size(); ++t) {
                if (t)
                    out += " | ";
                out += '(';
                for (std::size_t l = 0; l < e.terms[t].size(); ++l) {
                    if (l)
                        out += " & ";
                    out += literal_text(e.terms[t][l]);
                }
                out += ')';
            }
        }
        out += ";\n";
    }
    out += "endmodule\n";
    return out;
}

std::string synthesize_header(const TruthTable &table, std::string_view module_name)
{
    // Group "a[3]", "a[1]" into one vector port per base name.
    auto ports = [](const std::vector<std::string> &names, const char *dir) {
        std::vector<std::string> order;
        std::map<std::string, std::pair<int, int>> ranges;
        std::set<std::string> scalar;
        for (const auto &n : names) {
            std::string base(verilog::base_name(n));
            if (std::find(order.begin(), order.end(), base) == order.end())
                order.push_back(base);
            auto open = n.find('[');
            if (open == std::string::npos) {
                scalar.insert(base);
                continue;
            }
            int idx = std::stoi(n.substr(open + 1));
            auto [it, fresh] = ranges.try_emplace(base, idx, idx);
            if (!fresh) {
                it->second.first = std::max(it->second.first, idx);
                it->second.second = std::min(it->second.second, idx);
            }
        }
        std::vector<std::string> decls;
        for (const auto &base : order) {
            if (ranges.count(base) && !scalar.count(base))
                decls.push_back(std::string(dir) + " [" + std::to_string(ranges[base].first) + ":"
                                + std::to_string(ranges[base].second) + "] " + base);
            else
                decls.push_back(std::string(dir) + " " + base);
        }
        return decls;
    };
    auto decls = ports(table.inputs, "input");
    for (auto &d : ports(table.outputs, "output"))
        decls.push_back(std::move(d));
    std::string out = "module " + std::string(module_name) + " (\n";
    for (std::size_t i = 0; i < decls.size(); ++i)
        out += "\t" + decls[i] + (i + 1 < decls.size() ? ",\n" : "\n");
    out += ");";
    return out;
}

TruthTable request_truth_table(const InformationList &info_list, const Task &task, const LlmSession &session)
{
    std::string reply = session.ask("truth_table", {{"info_list", info_list.render()}, {"header", task.module_header}});
    return parse_truth_table(extract_first_json_object(reply));
}

std::string run_comb(const InformationList &info_list, const Task &task, const LlmSession &session)
{
    TruthTable table = request_truth_table(info_list, task, session);
    std::vector<SopExpression> exprs;
    exprs.reserve(table.outputs.size());
    try {
        for (const auto &o : table.outputs)
            exprs.push_back(minimize(table, o));
        std::string header = task.module_header.empty() ? synthesize_header(table) : task.module_header;
        return emit_verilog(header, exprs);
    } catch (const PortMismatch &e) {
        throw FormatError("comb", std::string("truth table does not match the module ports: ") + e.what());
    } catch (const ContractViolation &e) {
        throw FormatError("comb", e.what());
    }
}

} // namespace hdlgen
