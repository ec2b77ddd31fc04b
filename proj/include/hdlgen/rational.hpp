// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace hdlgen {

/// Exact fraction over int64 with a positive, fully reduced denominator.
/// Arithmetic goes through 128-bit intermediates and throws ContractViolation
/// when a reduced result no longer fits.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

    /// "m/n", or "m" when the denominator is 1.
    std::string to_string() const;

    /// Parses "3/4", "-2", or a plain decimal such as "0.95" (taken exactly as 95/100).
    static Rational parse(const std::string &text);

    /// Exact value of the shortest decimal that round-trips `value`.
    static Rational from_double(double value);

    friend Rational operator+(const Rational &a, const Rational &b);
    friend Rational operator-(const Rational &a, const Rational &b);
    friend Rational operator*(const Rational &a, const Rational &b);
    friend Rational operator/(const Rational &a, const Rational &b);

    Rational &operator+=(const Rational &o) { return *this = *this + o; }

    friend bool operator==(const Rational &a, const Rational &b) noexcept
    {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational &a, const Rational &b) noexcept;

private:
    static Rational from_wide(__int128 num, __int128 den);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace hdlgen
