#pragma once

#include <concepts>

#include "msm/rational.hpp"

namespace msm {

// Bridge from exact rational constants into whatever scalar a hierarchy
// runs over. Specialized per scalar; partial specializations (number
// fields) hook in through the struct.
template <class F>
struct rational_cast_impl;

template <>
struct rational_cast_impl<double> {
    static double cast(const Rational& q) { return to_double(q); }
};

template <>
struct rational_cast_impl<Rational> {
    static Rational cast(const Rational& q) { return q; }
};

template <class F>
F from_rational(const Rational& q) {
    return rational_cast_impl<F>::cast(q);
}

// Scalars the perturbation hierarchies accept: field arithmetic, exact or
// floating, with a lossy view into double for reporting.
template <class F>
concept field_scalar = requires(F a, F b, const Rational& q) {
    { a + b } -> std::convertible_to<F>;
    { a - b } -> std::convertible_to<F>;
    { a * b } -> std::convertible_to<F>;
    { a / b } -> std::convertible_to<F>;
    { -a } -> std::convertible_to<F>;
    { from_rational<F>(q) } -> std::convertible_to<F>;
    { to_double(a) } -> std::convertible_to<double>;
    { a == b } -> std::convertible_to<bool>;
};

template <class F>
F field_pow(const F& base, long n) {
    if (n < 0)
        return from_rational<F>(Rational(1)) / field_pow(base, -n);
    F acc = from_rational<F>(Rational(1));
    F sq = base;
    while (n > 0) {
        if (n & 1)
            acc = acc * sq;
        sq = sq * sq;
        n >>= 1;
    }
    return acc;
}

} // namespace msm
