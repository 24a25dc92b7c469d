#pragma once

#include <gsl/gsl_poly.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "msm/errors.hpp"
#include "msm/euler.hpp" // gsl_quiet
#include "msm/rational.hpp"

namespace msm {

// One monomial c * eps^e attached to a power of x.
struct EpsMonomial {
    Rational coeff;
    Rational exponent;
};

struct PolyTerm {
    int x_degree = 0;
    std::vector<EpsMonomial> eps_poly; // sorted by exponent, exponents unique
};

// Input row for the constructor: coeff * eps^eps_power * x^x_degree.
struct PolyEntry {
    int x_degree;
    Rational coeff;
    Rational eps_power;
};

// P(x, eps) = sum over terms of c_j(eps) x^j with exact rational data.
// eps-exponents may be fractional (rescaled polynomials carry sqrt(eps))
// but must be nonnegative.
class PerturbedPolynomial {
public:
    PerturbedPolynomial(std::initializer_list<PolyEntry> entries)
        : PerturbedPolynomial(std::vector<PolyEntry>(entries)) {}

    explicit PerturbedPolynomial(const std::vector<PolyEntry>& entries) {
        std::map<int, std::map<Rational, Rational>> acc;
        for (const auto& e : entries) {
            if (e.x_degree < 0)
                throw DomainError("PerturbedPolynomial: negative x-degree");
            if (e.eps_power < 0)
                throw DomainError("PerturbedPolynomial: negative eps-exponent");
            acc[e.x_degree][e.eps_power] += e.coeff;
        }
        for (auto& [j, monos] : acc) {
            PolyTerm term;
            term.x_degree = j;
            for (auto& [expo, c] : monos)
                if (c != 0)
                    term.eps_poly.push_back({c, expo});
            if (!term.eps_poly.empty())
                terms_.push_back(std::move(term));
        }
        bool has_positive_degree = false;
        for (const auto& t : terms_)
            has_positive_degree = has_positive_degree || t.x_degree >= 1;
        if (!has_positive_degree)
            throw DomainError("PerturbedPolynomial: needs a term with x-degree >= 1");
    }

    const std::vector<PolyTerm>& terms() const { return terms_; }

    int degree() const {
        int d = 0;
        for (const auto& t : terms_)
            d = std::max(d, t.x_degree);
        return d;
    }

    bool integer_exponents() const {
        for (const auto& t : terms_)
            for (const auto& m : t.eps_poly)
                if (!is_integer(m.exponent))
                    return false;
        return true;
    }

    // Coefficients of P(x, 0), index = x-degree, trailing zeros trimmed.
    std::vector<Rational> unperturbed_coeffs() const {
        std::vector<Rational> c(static_cast<std::size_t>(degree()) + 1, Rational(0));
        for (const auto& t : terms_)
            for (const auto& m : t.eps_poly)
                if (m.exponent == 0)
                    c[static_cast<std::size_t>(t.x_degree)] += m.coeff;
        while (!c.empty() && c.back() == 0)
            c.pop_back();
        return c;
    }

    double eval(double x, double eps) const {
        double sum = 0.0;
        for (const auto& t : terms_) {
            double cj = 0.0;
            for (const auto& m : t.eps_poly)
                cj += to_double(m.coeff) * std::pow(eps, to_double(m.exponent));
            sum += cj * std::pow(x, t.x_degree);
        }
        return sum;
    }

    double eval_dx(double x, double eps) const {
        double sum = 0.0;
        for (const auto& t : terms_) {
            if (t.x_degree == 0)
                continue;
            double cj = 0.0;
            for (const auto& m : t.eps_poly)
                cj += to_double(m.coeff) * std::pow(eps, to_double(m.exponent));
            sum += cj * t.x_degree * std::pow(x, t.x_degree - 1);
        }
        return sum;
    }

    // Flattened (x-degree, eps-exponent, coeff) rows, for exact formal
    // comparisons of rescaled polynomials.
    struct Item {
        int x_degree;
        Rational exponent;
        Rational coeff;
    };
    std::vector<Item> items() const {
        std::vector<Item> out;
        for (const auto& t : terms_)
            for (const auto& m : t.eps_poly)
                out.push_back({t.x_degree, m.exponent, m.coeff});
        return out;
    }

private:
    std::vector<PolyTerm> terms_; // ascending x-degree
};

// The worked root-finding problems, by shape.
inline PerturbedPolynomial quadratic_root_problem() {
    return {{2, 1, 0}, {1, -1, 0}, {0, 1, 1}}; // x^2 - x + eps
}
inline PerturbedPolynomial quintic_root_problem() {
    return {{5, 1, 0}, {1, -2, 0}, {0, 1, 1}}; // x^5 - 2x + eps
}
inline PerturbedPolynomial singular_quadratic_problem() {
    return {{2, 1, 1}, {1, 1, 0}, {0, -1, 0}}; // eps x^2 + x - 1
}
inline PerturbedPolynomial singular_cubic_problem() {
    return {{3, 1, 1}, {1, 1, 0}, {0, -1, 0}}; // eps x^3 + x - 1
}

// Real roots of P(x, 0), ascending, deduplicated, polished to 1e-12.
inline std::vector<double> solve_unperturbed(const PerturbedPolynomial& P) {
    const std::vector<Rational> coeffs = P.unperturbed_coeffs();
    if (coeffs.empty())
        throw DomainError("solve_unperturbed: P(x, 0) is identically zero");
    if (coeffs.size() == 1)
        throw NoRoots("solve_unperturbed: P(x, 0) is a nonzero constant");

    std::vector<double> c;
    c.reserve(coeffs.size());
    for (const Rational& q : coeffs)
        c.push_back(to_double(q));

    std::vector<double> roots;
    if (c.size() == 2) {
        roots.push_back(-c[0] / c[1]);
    } else {
        gsl_quiet();
        const std::size_t n = c.size();
        std::unique_ptr<gsl_poly_complex_workspace, void (*)(gsl_poly_complex_workspace*)> ws(
            gsl_poly_complex_workspace_alloc(n), gsl_poly_complex_workspace_free);
        std::vector<double> z(2 * (n - 1));
        if (gsl_poly_complex_solve(c.data(), n, ws.get(), z.data()) != 0)
            throw ConvergenceFailure("solve_unperturbed: companion QR failed");

        double scale = 0.0;
        for (double v : c)
            scale = std::max(scale, std::abs(v));
        for (std::size_t i = 0; i < 2 * (n - 1); i += 2) {
            if (std::abs(z[i + 1]) > 1e-8 * (1.0 + std::abs(z[i])))
                continue;
            // Newton polish on the exact real polynomial.
            double x = z[i];
            for (int it = 0; it < 8; ++it) {
                double p = 0.0, dp = 0.0;
                for (std::size_t k = c.size(); k-- > 0;) {
                    dp = dp * x + p;
                    p = p * x + c[k];
                }
                if (dp == 0.0)
                    break;
                const double step = p / dp;
                x -= step;
                if (std::abs(step) < 1e-15 * (1.0 + std::abs(x)))
                    break;
            }
            double p = 0.0;
            for (std::size_t k = c.size(); k-- > 0;)
                p = p * x + c[k];
            if (std::abs(p) <= 1e-12 * std::max(1.0, scale))
                roots.push_back(x);
        }
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> unique_roots;
    for (double r : roots)
        if (unique_roots.empty() || std::abs(r - unique_roots.back()) > 1e-9 * (1.0 + std::abs(r)))
            unique_roots.push_back(r);
    if (unique_roots.empty())
        throw NoRoots("solve_unperturbed: no real roots at eps = 0");
    return unique_roots;
}

struct RescaleResult {
    PerturbedPolynomial poly; // Q(y, eps)
    Rational p;               // x = eps^{-p} y
    Rational power;           // q with Q(eps^p x, eps) = eps^q P(x, eps)
};

// Substitute x = eps^{-p} y and normalize so the smallest eps-exponent
// across terms is zero.
inline RescaleResult rescale(const PerturbedPolynomial& P, const Rational& p) {
    if (p < 0)
        throw DomainError("rescale: p must be nonnegative");
    if (p.get_den() > 4)
        throw DomainError("rescale: exponent denominator above 4");

    const auto items = P.items();
    bool first = true;
    Rational lowest;
    for (const auto& it : items) {
        const Rational e = it.exponent - p * it.x_degree;
        if (first || e < lowest) {
            lowest = e;
            first = false;
        }
    }
    std::vector<PolyEntry> entries;
    for (const auto& it : items)
        entries.push_back({it.x_degree, it.coeff, it.exponent - p * it.x_degree - lowest});
    return {PerturbedPolynomial(entries), p, -lowest};
}

// Dominant-balance candidates: p > 0 (denominator <= 4) where at least two
// monomials of the rescaled polynomial share the minimal eps-exponent.
inline std::vector<Rational> find_balance_exponents(const PerturbedPolynomial& P) {
    const auto items = P.items();
    if (items.size() < 2)
        throw DomainError("find_balance_exponents: need at least two terms");

    std::vector<Rational> found;
    for (std::size_t a = 0; a < items.size(); ++a) {
        for (std::size_t b = a + 1; b < items.size(); ++b) {
            if (items[a].x_degree == items[b].x_degree)
                continue;
            const Rational p = (items[a].exponent - items[b].exponent) /
                               Rational(items[a].x_degree - items[b].x_degree);
            if (p <= 0 || p.get_den() > 4)
                continue;
            // Count monomials attaining the minimal rescaled exponent.
            bool first = true;
            Rational lowest;
            for (const auto& it : items) {
                const Rational e = it.exponent - p * it.x_degree;
                if (first || e < lowest) {
                    lowest = e;
                    first = false;
                }
            }
            int at_min = 0;
            for (const auto& it : items)
                if (it.exponent - p * it.x_degree == lowest)
                    ++at_min;
            if (at_min >= 2 && std::find(found.begin(), found.end(), p) == found.end())
                found.push_back(p);
        }
    }
    std::sort(found.begin(), found.end());
    return found;
}

// Safeguarded Newton for the root of P(x, eps) nearest `near`: damped
// steps, absolute residual target 1e-13.
inline double exact_root_oracle(const PerturbedPolynomial& P, double eps, double near) {
    double x = near;
    double fx = P.eval(x, eps);
    for (int it = 0; it < 100; ++it) {
        if (std::abs(fx) <= 1e-13)
            return x;
        const double dfx = P.eval_dx(x, eps);
        if (dfx == 0.0 || !std::isfinite(dfx))
            throw ConvergenceFailure("exact_root_oracle: derivative vanished");
        double step = -fx / dfx;
        double xn = x + step;
        double fn = P.eval(xn, eps);
        for (int halvings = 0; halvings < 40 && !(std::abs(fn) < std::abs(fx)); ++halvings) {
            step *= 0.5;
            xn = x + step;
            fn = P.eval(xn, eps);
        }
        if (!(std::abs(fn) < std::abs(fx)) && std::abs(fx) > 1e-13)
            throw ConvergenceFailure("exact_root_oracle: damping stalled");
        x = xn;
        fx = fn;
    }
    if (std::abs(fx) <= 1e-13)
        return x;
    throw ConvergenceFailure("exact_root_oracle: no convergence in 100 iterations");
}

} // namespace msm
