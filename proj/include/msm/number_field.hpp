#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "msm/errors.hpp"
#include "msm/field.hpp"
#include "msm/rational.hpp"

namespace msm {

namespace detail {

// Dense polynomials over Q, coefficient of x^i at index i. Only what the
// extended Euclid below needs; not exposed.
using QPoly = std::vector<Rational>;

inline void qpoly_trim(QPoly& p) {
    while (!p.empty() && p.back() == 0)
        p.pop_back();
}

inline QPoly qpoly_sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i)
        r[i] -= b[i];
    qpoly_trim(r);
    return r;
}

inline QPoly qpoly_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty())
        return {};
    QPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    qpoly_trim(r);
    return r;
}

// Quotient of a by b (b nonzero); remainder comes out of qpoly_sub.
inline QPoly qpoly_quot(QPoly a, const QPoly& b) {
    QPoly q(a.size() > b.size() - 1 ? a.size() - b.size() + 1 : 0, Rational(0));
    while (a.size() >= b.size() && !a.empty()) {
        const Rational f = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        q[shift] = f;
        QPoly fb(shift, Rational(0));
        for (const Rational& c : b)
            fb.push_back(f * c);
        a = qpoly_sub(a, fb);
    }
    qpoly_trim(q);
    return q;
}

} // namespace detail

// Element of the number field Q(theta) with theta^Degree = Radicand,
// stored on the basis {1, theta, ..., theta^(Degree-1)}. Degree and
// radicand live in the type, so values from different fields cannot be
// mixed by accident and 0/1 literals construct cleanly. The modulus
// x^Degree - Radicand must be irreducible over Q for division to be
// total; with a reducible modulus, dividing by a zero divisor throws.
template <unsigned Degree, long Radicand>
class Radical {
    static_assert(Degree >= 1, "field degree must be at least 1");
    static_assert(Radicand != 0, "radicand must be nonzero");
    static_assert(Radicand > 0 || Degree % 2 == 1,
                  "negative radicand needs odd degree for a real embedding");

public:
    Radical() = default;
    Radical(long v) { c_[0] = v; } // NOLINT: implicit on purpose, mirrors scalar literals
    Radical(const Rational& v) { c_[0] = v; }

    static Radical theta() {
        Radical t;
        if constexpr (Degree == 1) {
            t.c_[0] = Radicand;
        } else {
            t.c_[1] = 1;
        }
        return t;
    }

    const Rational& coeff(unsigned i) const {
        if (i >= Degree)
            throw IndexError("Radical::coeff: index past degree");
        return c_[i];
    }

    bool is_zero() const {
        for (const Rational& c : c_)
            if (c != 0)
                return false;
        return true;
    }

    friend Radical operator+(const Radical& a, const Radical& b) {
        Radical r;
        for (unsigned i = 0; i < Degree; ++i)
            r.c_[i] = a.c_[i] + b.c_[i];
        return r;
    }

    friend Radical operator-(const Radical& a, const Radical& b) {
        Radical r;
        for (unsigned i = 0; i < Degree; ++i)
            r.c_[i] = a.c_[i] - b.c_[i];
        return r;
    }

    Radical operator-() const {
        Radical r;
        for (unsigned i = 0; i < Degree; ++i)
            r.c_[i] = -c_[i];
        return r;
    }

    friend Radical operator*(const Radical& a, const Radical& b) {
        // Convolve, then fold theta^(Degree+m) = Radicand * theta^m.
        std::array<Rational, 2 * Degree> full{};
        for (unsigned i = 0; i < Degree; ++i)
            for (unsigned j = 0; j < Degree; ++j)
                full[i + j] += a.c_[i] * b.c_[j];
        Radical r;
        for (unsigned i = 0; i < Degree; ++i)
            r.c_[i] = full[i];
        for (unsigned m = 0; m + 1 < Degree; ++m)
            r.c_[m] += Rational(Radicand) * full[Degree + m];
        return r;
    }

    friend Radical operator/(const Radical& a, const Radical& b) { return a * b.inverse(); }

    friend bool operator==(const Radical& a, const Radical& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Radical& a, const Radical& b) { return !(a == b); }

    // Extended Euclid against the modulus: find s with s*this == g (mod m);
    // for an invertible element g is a nonzero rational.
    Radical inverse() const {
        if (is_zero())
            throw DomainError("Radical::inverse: zero element");
        detail::QPoly r0(c_.begin(), c_.end());
        detail::qpoly_trim(r0);
        detail::QPoly r1(Degree + 1, Rational(0));
        r1[0] = -Rational(Radicand);
        r1[Degree] = 1;
        detail::QPoly s0{Rational(1)}, s1{};
        while (!r1.empty()) {
            const detail::QPoly q = detail::qpoly_quot(r0, r1);
            detail::QPoly r2 = detail::qpoly_sub(r0, detail::qpoly_mul(q, r1));
            detail::QPoly s2 = detail::qpoly_sub(s0, detail::qpoly_mul(q, s1));
            r0 = std::move(r1);
            r1 = std::move(r2);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        if (r0.size() != 1)
            throw DomainError("Radical::inverse: zero divisor (reducible modulus)");
        Radical inv;
        for (std::size_t i = 0; i < s0.size() && i < Degree; ++i)
            inv.c_[i] = s0[i] / r0[0];
        return inv;
    }

    double approx() const {
        const double root = (Radicand > 0)
                                ? std::pow(double(Radicand), 1.0 / Degree)
                                : -std::pow(-double(Radicand), 1.0 / Degree);
        double acc = 0, p = 1;
        for (unsigned i = 0; i < Degree; ++i, p *= root)
            acc += to_double(c_[i]) * p;
        return acc;
    }

private:
    std::array<Rational, Degree> c_{};
};

template <unsigned D, long R>
double to_double(const Radical<D, R>& x) {
    return x.approx();
}

template <unsigned D, long R>
struct rational_cast_impl<Radical<D, R>> {
    static Radical<D, R> cast(const Rational& q) { return Radical<D, R>(q); }
};

} // namespace msm
