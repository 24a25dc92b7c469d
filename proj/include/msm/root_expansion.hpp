#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "msm/errors.hpp"
#include "msm/field.hpp"
#include "msm/perturbed_polynomial.hpp"
#include "msm/series.hpp"

namespace msm {

namespace detail {

// Power series in eps truncated at a fixed order, coefficients in F.
template <field_scalar F>
struct TruncatedSeries {
    std::vector<F> c; // c[n] multiplies eps^n

    explicit TruncatedSeries(std::size_t order_count)
        : c(order_count, from_rational<F>(Rational(0))) {}

    static TruncatedSeries constant(const F& v, std::size_t order_count) {
        TruncatedSeries s(order_count);
        s.c[0] = v;
        return s;
    }

    TruncatedSeries mul(const TruncatedSeries& o) const {
        TruncatedSeries r(c.size());
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; i + j < c.size() && j < o.c.size(); ++j)
                r.c[i + j] = r.c[i + j] + c[i] * o.c[j];
        return r;
    }

    void add_scaled_shift(const F& factor, std::size_t shift, const TruncatedSeries& o) {
        for (std::size_t j = 0; j + shift < c.size() && j < o.c.size(); ++j)
            c[j + shift] = c[j + shift] + factor * o.c[j];
    }
};

// eps-expansion of P(S(eps), eps) through the series order, by Cauchy
// products of the cached powers of S.
template <field_scalar F>
TruncatedSeries<F> compose(const PerturbedPolynomial& P, const TruncatedSeries<F>& S) {
    const std::size_t order_count = S.c.size();
    std::vector<TruncatedSeries<F>> powers;
    powers.push_back(TruncatedSeries<F>::constant(from_rational<F>(Rational(1)), order_count));
    for (int d = 1; d <= P.degree(); ++d)
        powers.push_back(powers.back().mul(S));

    TruncatedSeries<F> out(order_count);
    for (const auto& term : P.terms())
        for (const auto& mono : term.eps_poly) {
            const std::size_t shift = static_cast<std::size_t>(mono.exponent.get_num().get_si());
            out.add_scaled_shift(from_rational<F>(mono.coeff), shift,
                                 powers[static_cast<std::size_t>(term.x_degree)]);
        }
    return out;
}

} // namespace detail

// Coefficients a_0..a_N of a simple-root expansion, together with the
// hierarchy's common linear operator L = dP/dx(a_0, 0) and the per-order
// right-hand sides it divided (a_p = -rhs_p / L for every p >= 1).
template <field_scalar F>
struct RootExpansion {
    F base_root;
    std::vector<F> coeffs;
    F linear_operator;
    std::vector<F> rhs_trace;

    double linear_operator_value() const { return to_double(linear_operator); }

    const F& coeff(std::size_t n) const {
        if (n >= coeffs.size())
            throw IndexError("RootExpansion::coeff: order " + std::to_string(n) +
                             " not computed");
        return coeffs[n];
    }

    AsymptoticSeries series() const {
        std::vector<double> c;
        c.reserve(coeffs.size());
        for (const F& a : coeffs)
            c.push_back(to_double(a));
        return AsymptoticSeries::from_real(0, std::move(c));
    }

    // Exact evaluation of the partial sum at a scalar eps.
    F evaluate(const F& eps, std::size_t m) const {
        if (m >= coeffs.size())
            throw IndexError("RootExpansion::evaluate: order not computed");
        F sum = from_rational<F>(Rational(0));
        F power = from_rational<F>(Rational(1));
        for (std::size_t n = 0; n <= m; ++n) {
            sum = sum + coeffs[n] * power;
            power = power * eps;
        }
        return sum;
    }
};

// Order-by-order solution of the perturbation hierarchy around a simple
// root a0 of P(x, 0). Every order is one division by the same L; the
// right-hand side at order p is the eps^p coefficient of P evaluated at
// the previous partial sum. Requires integer eps-exponents; expand
// half-power problems in delta = eps^{1/q} instead.
template <field_scalar F>
RootExpansion<F> expand_root(const PerturbedPolynomial& P, const F& a0, int N) {
    if (N < 0)
        throw DomainError("expand_root: negative order");
    if (!P.integer_exponents())
        throw DomainError("expand_root: fractional eps-exponents; substitute a root of eps");

    const std::size_t order_count = static_cast<std::size_t>(N) + 1;

    // P(a0, 0) must vanish: check the composed series' constant term.
    detail::TruncatedSeries<F> base = detail::TruncatedSeries<F>::constant(a0, 1);
    const F residual0 = detail::compose(P, base).c[0];
    if (std::abs(to_double(residual0)) > 1e-10)
        throw DomainError("expand_root: a0 is not a root of P(x, 0)");

    // L = dP/dx(a0, 0) assembled exactly from the eps^0 monomials.
    F L = from_rational<F>(Rational(0));
    for (const auto& term : P.terms()) {
        if (term.x_degree == 0)
            continue;
        for (const auto& mono : term.eps_poly)
            if (mono.exponent == 0)
                L = L + from_rational<F>(mono.coeff * term.x_degree) *
                            field_pow(a0, term.x_degree - 1);
    }
    if (std::abs(to_double(L)) < 1e-10)
        throw SingularHierarchy("expand_root: linear operator vanishes at a0");

    RootExpansion<F> result;
    result.base_root = a0;
    result.linear_operator = L;
    result.coeffs.assign(order_count, from_rational<F>(Rational(0)));
    result.coeffs[0] = a0;

    detail::TruncatedSeries<F> S(order_count);
    S.c[0] = a0;
    for (int p = 1; p <= N; ++p) {
        const F rhs = detail::compose(P, S).c[static_cast<std::size_t>(p)];
        const F ap = -rhs / L;
        result.rhs_trace.push_back(rhs);
        result.coeffs[static_cast<std::size_t>(p)] = ap;
        S.c[static_cast<std::size_t>(p)] = ap;
    }
    return result;
}

} // namespace msm
