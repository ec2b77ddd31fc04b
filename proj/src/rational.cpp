// SPDX-License-Identifier: Apache-2.0
// SPDX-FileCopyrightText: 2026 The hdlgen Authors

#include "hdlgen/rational.hpp"

#include "hdlgen/errors.hpp"

#include <charconv>
#include <limits>
#include <system_error>

namespace hdlgen {
namespace {

__int128 wide_gcd(__int128 a, __int128 b)
{
    if (a < 0)
        a = -a;
    if (b < 0)
        b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

bool fits(__int128 v)
{
    return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

std::int64_t parse_int(std::string_view s)
{
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw InputError("not an integer: '" + std::string(s) + "'");
    return value;
}

} // namespace

Rational::Rational(std::int64_t num, std::int64_t den)
{
    if (den == 0)
        throw ContractViolation("rational with zero denominator");
    *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den)
{
    if (den == 0)
        throw ContractViolation("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    __int128 g = wide_gcd(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (!fits(num) || !fits(den))
        throw ContractViolation("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
}

std::string Rational::to_string() const
{
    if (den_ == 1)
        return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(const std::string &text)
{
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
    if (s.empty())
        throw InputError("empty rational");

    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto den = parse_int(s.substr(slash + 1));
        if (den == 0)
            throw InputError("zero denominator in '" + text + "'");
        return Rational(parse_int(s.substr(0, slash)), den);
    }

    auto dot = s.find('.');
    if (dot == std::string_view::npos)
        return Rational(parse_int(s));

    bool negative = !s.empty() && s.front() == '-';
    std::string digits(s.substr(negative ? 1 : 0, dot - (negative ? 1 : 0)));
    std::string frac(s.substr(dot + 1));
    if (frac.size() > 17)
        frac.resize(17);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i)
        den *= 10;
    std::int64_t whole = digits.empty() ? 0 : parse_int(digits);
    std::int64_t part = frac.empty() ? 0 : parse_int(frac);
    __int128 num = static_cast<__int128>(whole) * den + part;
    return from_wide(negative ? -num : num, den);
}

Rational Rational::from_double(double value)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    if (ec != std::errc())
        throw ContractViolation("cannot represent value as rational");
    return parse(std::string(buf, ptr));
}

Rational operator+(const Rational &a, const Rational &b)
{
    return Rational::from_wide(
        static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
        static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational &a, const Rational &b)
{
    return Rational::from_wide(
        static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
        static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational &a, const Rational &b)
{
    return Rational::from_wide(
        static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational &a, const Rational &b)
{
    if (b.num_ == 0)
        throw ContractViolation("rational division by zero");
    return Rational::from_wide(
        static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational &a, const Rational &b) noexcept
{
    __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
    __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
    if (lhs < rhs)
        return std::strong_ordering::less;
    if (lhs > rhs)
        return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

} // namespace hdlgen
