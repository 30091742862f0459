#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

#include "yamabe/errors.hpp"

namespace yamabe {

/// Arbitrary precision rational; always kept in lowest terms by the backend.
using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline Rational rat(long long p, long long q = 1) {
    if (q == 0) throw std::invalid_argument("rat: zero denominator");
    return Rational(BigInt(p), BigInt(q));
}

inline std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

/// Exact conversion: every finite double is a dyadic rational.
inline Rational from_double(double x) {
    if (!std::isfinite(x)) throw ParseError("non-finite value cannot be made rational");
    int exp = 0;
    double mant = std::frexp(x, &exp);
    // 53 bits of mantissa fit in a 64-bit integer.
    const auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r{BigInt(scaled)};
    if (exp > 0) r *= Rational(BigInt(1) << exp);
    if (exp < 0) r /= Rational(BigInt(1) << -exp);
    return r;
}

namespace detail {

inline BigInt parse_integer(std::string_view s) {
    if (s.empty()) throw ParseError("empty integer");
    std::size_t i = 0;
    bool neg = false;
    if (s[0] == '+' || s[0] == '-') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw ParseError("sign without digits");
    BigInt v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i])))
            throw ParseError("bad digit in '" + std::string(s) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return neg ? BigInt(-v) : v;
}

inline BigInt pow10(int e) {
    BigInt p = 1;
    for (int i = 0; i < e; ++i) p *= 10;
    return p;
}

}  // namespace detail

/// Parses "p", "p/q" or a decimal literal such as "-1.25e-3", exactly.
inline Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ParseError("empty rational");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt num = detail::parse_integer(text.substr(0, slash));
        BigInt den = detail::parse_integer(text.substr(slash + 1));
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }

    int exponent = 0;
    std::string_view mantissa = text;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = text.substr(0, e);
        BigInt ev = detail::parse_integer(text.substr(e + 1));
        if (abs(ev) > 4000) throw ParseError("exponent out of range");
        exponent = ev.convert_to<int>();
    }
    std::string digits;
    if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
        digits = std::string(mantissa.substr(0, dot)) + std::string(mantissa.substr(dot + 1));
        exponent -= static_cast<int>(mantissa.size() - dot - 1);
        if (digits.empty() || digits == "-" || digits == "+") throw ParseError("bad decimal");
    } else {
        digits = std::string(mantissa);
    }
    Rational r{detail::parse_integer(digits)};
    if (exponent > 0) r *= Rational(detail::pow10(exponent));
    if (exponent < 0) r /= Rational(detail::pow10(-exponent));
    return r;
}

inline Rational factorial(int k) {
    BigInt f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return Rational(f);
}

/// Minimal scalar policy used by the templates that run both exactly and in
/// floating point.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static bool is_zero(const Rational& x, double = 0.0) { return x == 0; }
    static Rational from_ratio(long long p, long long q) { return rat(p, q); }
    static double to_double(const Rational& x) { return yamabe::to_double(x); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static bool is_zero(double x, double tol) { return std::abs(x) <= tol; }
    static double from_ratio(long long p, long long q) {
        return static_cast<double>(p) / static_cast<double>(q);
    }
    static double to_double(double x) { return x; }
};

template <class S>
S ratio(long long p, long long q = 1) {
    return ScalarTraits<S>::from_ratio(p, q);
}

}  // namespace yamabe
