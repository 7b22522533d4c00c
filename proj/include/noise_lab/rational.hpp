#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdio>
#include <regex>
#include <string>
#include <string_view>

#include "errors.hpp"

namespace noise_lab {

using Rational = mpq_class;

/// Parses "p/q" or an integer string. The result is canonical (lowest terms).
inline Rational parse_rational(std::string_view text) {
    static const std::regex pattern("^-?[0-9]+(/[1-9][0-9]*)?$");
    const std::string s(text);
    if (!std::regex_match(s, pattern)) {
        throw InputError("not a fraction string: \"" + s + "\"");
    }
    Rational r(s, 10);
    r.canonicalize();
    return r;
}

/// "p/q", or "p" when the denominator is 1.
inline std::string to_string(const Rational& r) { return r.get_str(10); }

inline double to_double(const Rational& r) { return r.get_d(); }
inline double to_double(double d) { return d; }

/// Decimal rendering with 12 significant digits.
inline std::string to_decimal(double d) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", d);
    return buf;
}
inline std::string to_decimal(const Rational& r) { return to_decimal(r.get_d()); }

/// True iff r is a dyadic rational (denominator a power of two).
inline bool is_dyadic(const Rational& r) {
    const mpz_class& den = r.get_den();
    return mpz_popcount(den.get_mpz_t()) == 1;
}

/// Arithmetic policy for the two numeric backends.
template <class Scalar>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static bool is_zero(const Rational& v) { return sgn(v) == 0; }
    static bool equal(const Rational& a, const Rational& b) { return a == b; }
    static bool less_equal(const Rational& a, const Rational& b) { return a <= b; }
    static Rational from_rational(const Rational& r) { return r; }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static constexpr double tolerance = 1e-9;
    static bool is_zero(double v) { return std::abs(v) <= tolerance; }
    static bool equal(double a, double b) { return std::abs(a - b) <= tolerance; }
    static bool less_equal(double a, double b) { return a <= b + tolerance; }
    static double from_rational(const Rational& r) { return r.get_d(); }
};

} // namespace noise_lab
