#pragma once

#include "error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <cctype>
#include <string>
#include <string_view>

namespace agora {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using u128 = unsigned __int128;

inline BigInt numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline BigInt to_bigint(u128 v)
{
    BigInt hi = static_cast<std::uint64_t>(v >> 64);
    BigInt lo = static_cast<std::uint64_t>(v);
    return (hi << 64) | lo;
}

/// Exact quotient a/b of two 128-bit weights, reduced.
inline Rational ratio(u128 a, u128 b) { return Rational(to_bigint(a), to_bigint(b)); }

/// Fits in u128 with at least one spare bit (so that a + b never wraps for a, b <= limit).
inline bool fits_weight(const BigInt& v) { return v >= 0 && boost::multiprecision::msb(v + 1) < 127; }

inline u128 to_u128(const BigInt& v)
{
    if (v < 0 || (v != 0 && boost::multiprecision::msb(v) >= 128))
        throw Error(ErrorCode::WeightPrecisionExceeded, "value does not fit in 128 bits");
    const BigInt mask = (BigInt(1) << 64) - 1;
    auto lo = static_cast<std::uint64_t>(v & mask);
    auto hi = static_cast<std::uint64_t>(v >> 64);
    return (static_cast<u128>(hi) << 64) | lo;
}

/// Parses "num/den", an integer, or a plain decimal such as "0.55".
inline Rational parse_rational(std::string_view text)
{
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    std::string s(text);
    auto fail = [&]() -> Rational {
        throw Error(ErrorCode::ParseError, "not a rational number: '" + s + "'");
    };
    if (s.empty())
        return fail();
    try {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            BigInt num(s.substr(0, slash));
            BigInt den(s.substr(slash + 1));
            if (den == 0)
                return fail();
            return Rational(num, den);
        }
        if (auto dot = s.find('.'); dot != std::string::npos) {
            std::string whole = s.substr(0, dot);
            std::string frac = s.substr(dot + 1);
            bool negative = !whole.empty() && whole[0] == '-';
            if (negative)
                whole.erase(0, 1);
            if (whole.empty())
                whole = "0";
            if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos ||
                whole.find_first_not_of("0123456789") != std::string::npos)
                return fail();
            BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
            Rational r(BigInt(whole) * scale + BigInt(frac), scale);
            return negative ? Rational(-r) : r;
        }
        if (s.find_first_not_of("-0123456789") != std::string::npos)
            return fail();
        return Rational(BigInt(s));
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        return fail();
    }
}

inline std::string to_string(const Rational& r)
{
    return numerator_of(r).str() + "/" + denominator_of(r).str();
}

/// Decimal approximation rounded to `places` digits (display only).
inline std::string to_decimal(const Rational& r, int places = 12)
{
    BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(places));
    BigInt num = numerator_of(r) * scale;
    BigInt den = denominator_of(r);
    bool negative = num < 0;
    if (negative)
        num = -num;
    BigInt q = (2 * num + den) / (2 * den);
    std::string digits = q.str();
    if (digits.size() <= static_cast<std::size_t>(places))
        digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
    return (negative && q != 0 ? "-" : "") + digits;
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline const Rational& half()
{
    static const Rational h(1, 2);
    return h;
}

} // namespace agora
