// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

// Independent oracles and generators shared by the unit and acceptance tests.
// Nothing here calls into the code under test except for types.

#include "hdlgen/comb.hpp"
#include "hdlgen/rational.hpp"

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdlgen::testing {

#ifdef HDLGEN_FIXTURE_DIR
inline std::string fixture_path(const std::string &relative)
{
    return std::string(HDLGEN_FIXTURE_DIR) + "/" + relative;
}

inline std::string read_fixture(const std::string &relative)
{
    std::ifstream in(fixture_path(relative), std::ios::binary);
    if (!in)
        throw std::runtime_error("missing fixture " + relative);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}
#endif

/// Fraction of k-subsets of n samples (c of them passing) that hold a pass,
/// by enumerating every subset as a bitmask.
inline Rational brute_force_pass_at_k(int n, int c, int k)
{
    std::int64_t hit = 0, all = 0;
    const std::uint32_t passing = (1u << c) - 1u;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k)
            continue;
        ++all;
        if (mask & passing)
            ++hit;
    }
    return Rational(hit, all);
}

/// Random table over `inputs` inputs; each row is kept with probability
/// `keep`, each output cell is don't-care with probability `dc`.
inline TruthTable random_table(std::mt19937 &rng, int inputs, int outputs, double keep, double dc)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    TruthTable t;
    for (int i = 0; i < inputs; ++i)
        t.inputs.push_back(std::string(1, static_cast<char>('a' + i)));
    for (int o = 0; o < outputs; ++o)
        t.outputs.push_back("y" + std::to_string(o));
    for (int m = 0; m < (1 << inputs); ++m) {
        if (u(rng) >= keep)
            continue;
        std::vector<Cell> row;
        for (int i = inputs - 1; i >= 0; --i)
            row.push_back((m >> i) & 1 ? Cell::One : Cell::Zero);
        for (int o = 0; o < outputs; ++o) {
            double r = u(rng);
            row.push_back(r < dc ? Cell::DontCare : (u(rng) < 0.5 ? Cell::One : Cell::Zero));
        }
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) {
        std::vector<Cell> row(static_cast<std::size_t>(inputs), Cell::Zero);
        row.push_back(Cell::One);
        for (int o = 1; o < outputs; ++o)
            row.push_back(Cell::Zero);
        t.rows.push_back(std::move(row));
    }
    return t;
}

inline std::map<std::string, bool> row_assignment(const TruthTable &t, const std::vector<Cell> &row)
{
    std::map<std::string, bool> a;
    for (std::size_t i = 0; i < t.inputs.size(); ++i)
        a[t.inputs[i]] = row[i] == Cell::One;
    return a;
}

/// Direct evaluation of a product list, written without the library evaluator.
inline bool eval_products(const SopExpression &e, const std::map<std::string, bool> &a)
{
    if (e.constant)
        return *e.constant;
    for (const auto &term : e.terms) {
        bool all = true;
        for (const auto &lit : term)
            if (a.at(lit.input) == lit.negated)
                all = false;
        if (all)
            return true;
    }
    return false;
}

/// True when the SOP matches the table on every care cell of `output`.
inline bool sound_on_table(const TruthTable &t, std::size_t output, const SopExpression &e)
{
    for (const auto &row : t.rows) {
        Cell want = row[t.inputs.size() + output];
        if (want == Cell::DontCare)
            continue;
        if (eval_products(e, row_assignment(t, row)) != (want == Cell::One))
            return false;
    }
    return true;
}

/// Every product is an implicant (no off-row covered) and dropping any one
/// of its literals covers an off-row, checked over the full input space with
/// absent rows as don't-cares.
inline bool all_products_prime(const TruthTable &t, std::size_t output, const SopExpression &e)
{
    const std::size_t v = t.inputs.size();
    std::vector<std::vector<bool>> off_points;
    for (const auto &row : t.rows)
        if (row[v + output] == Cell::Zero) {
            std::vector<bool> p;
            for (std::size_t i = 0; i < v; ++i)
                p.push_back(row[i] == Cell::One);
            off_points.push_back(p);
        }
    auto covers_off = [&](const Product &prod) {
        for (const auto &p : off_points) {
            bool in = true;
            for (const auto &lit : prod) {
                std::size_t idx = 0;
                while (t.inputs[idx] != lit.input)
                    ++idx;
                if (p[idx] == lit.negated)
                    in = false;
            }
            if (in)
                return true;
        }
        return false;
    };
    for (const auto &prod : e.terms) {
        if (covers_off(prod))
            return false;
        for (std::size_t drop = 0; drop < prod.size(); ++drop) {
            Product shorter = prod;
            shorter.erase(shorter.begin() + static_cast<long>(drop));
            if (!covers_off(shorter))
                return false;
        }
    }
    return true;
}

/// Evaluates the right-hand sides of `assign <bit> = <expr>;` lines in a
/// Verilog module. Supports identifiers with constant bit selects, ~ & | ^,
/// parentheses and 1'b0/1'b1: enough to act as a simulator for emitted
/// two-level logic.
class AssignInterpreter {
public:
    explicit AssignInterpreter(const std::string &module_src)
    {
        std::size_t pos = 0;
        while ((pos = module_src.find("assign", pos)) != std::string::npos) {
            auto eq = module_src.find('=', pos);
            auto semi = module_src.find(';', eq);
            if (eq == std::string::npos || semi == std::string::npos)
                throw std::runtime_error("malformed assign");
            assigns_[strip(module_src.substr(pos + 6, eq - pos - 6))] = module_src.substr(eq + 1, semi - eq - 1);
            pos = semi;
        }
    }

    bool drives(const std::string &bit) const { return assigns_.count(bit) != 0; }

    bool eval(const std::string &bit, const std::map<std::string, bool> &inputs) const
    {
        text_ = &assigns_.at(bit);
        at_ = 0;
        env_ = &inputs;
        bool v = parse_or();
        skip();
        if (at_ != text_->size())
            throw std::runtime_error("trailing text in assign for " + bit);
        return v;
    }

private:
    static std::string strip(const std::string &s)
    {
        std::string out;
        for (char c : s)
            if (!std::isspace(static_cast<unsigned char>(c)))
                out += c;
        return out;
    }

    void skip() const
    {
        while (at_ < text_->size() && std::isspace(static_cast<unsigned char>((*text_)[at_])))
            ++at_;
    }

    bool peek(char c) const
    {
        skip();
        return at_ < text_->size() && (*text_)[at_] == c;
    }

    bool parse_or() const
    {
        bool v = parse_xor();
        while (peek('|')) {
            ++at_;
            bool r = parse_xor();
            v = v || r;
        }
        return v;
    }

    bool parse_xor() const
    {
        bool v = parse_and();
        while (peek('^')) {
            ++at_;
            v = v != parse_and();
        }
        return v;
    }

    bool parse_and() const
    {
        bool v = parse_unary();
        while (peek('&')) {
            ++at_;
            bool r = parse_unary();
            v = v && r;
        }
        return v;
    }

    bool parse_unary() const
    {
        if (peek('~')) {
            ++at_;
            return !parse_unary();
        }
        if (peek('(')) {
            ++at_;
            bool v = parse_or();
            if (!peek(')'))
                throw std::runtime_error("missing )");
            ++at_;
            return v;
        }
        skip();
        const std::string &t = *text_;
        if (t.compare(at_, 4, "1'b0") == 0) {
            at_ += 4;
            return false;
        }
        if (t.compare(at_, 4, "1'b1") == 0) {
            at_ += 4;
            return true;
        }
        std::size_t start = at_;
        while (at_ < t.size() && (std::isalnum(static_cast<unsigned char>(t[at_])) || t[at_] == '_'))
            ++at_;
        if (at_ < t.size() && t[at_] == '[') {
            auto close = t.find(']', at_);
            at_ = close + 1;
        }
        std::string name = strip(t.substr(start, at_ - start));
        auto it = env_->find(name);
        if (name.empty() || it == env_->end())
            throw std::runtime_error("unbound signal '" + name + "'");
        return it->second;
    }

    std::map<std::string, std::string> assigns_;
    mutable const std::string *text_ = nullptr;
    mutable std::size_t at_ = 0;
    mutable const std::map<std::string, bool> *env_ = nullptr;
};

} // namespace hdlgen::testing
