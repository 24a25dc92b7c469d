#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "msm/errors.hpp"

namespace msm {

// Exact rational scalar. GMP's canonicalized mpq does everything we need;
// this header only pins the alias and a few free helpers so the rest of
// the library never touches raw mpq functions.
using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
    if (den == 0)
        throw DomainError("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

// Parses "n", "n/d", or a decimal like "-0.25" (exactly, as 'digits/10^k').
inline Rational parse_rational(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos) {
        Rational q;
        if (q.set_str(text, 10) != 0)
            throw DomainError("parse_rational: cannot parse '" + text + "'");
        q.canonicalize();
        return q;
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_len = text.size() - dot - 1;
    Rational mant;
    if (frac_len == 0 || mant.set_str(digits, 10) != 0)
        throw DomainError("parse_rational: cannot parse '" + text + "'");
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac_len);
    Rational q = mant / Rational(scale);
    q.canonicalize();
    return q;
}

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

// q^n for integer n, negative n inverts.
inline Rational pow_rational(const Rational& q, long n) {
    if (n < 0) {
        if (q == 0)
            throw DomainError("pow_rational: 0 to negative power");
        return 1 / pow_rational(q, -n);
    }
    Rational acc = 1, base = q;
    while (n > 0) {
        if (n & 1)
            acc *= base;
        base *= base;
        n >>= 1;
    }
    return acc;
}

} // namespace msm
