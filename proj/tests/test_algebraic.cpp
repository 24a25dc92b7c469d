#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "msm/number_field.hpp"
#include "msm/perturbed_polynomial.hpp"
#include "msm/root_expansion.hpp"

using namespace msm;

namespace {

using Root4of2 = Radical<4, 2>; // Q(theta), theta^4 = 2

// Independent exact evaluation of P(x, eps) over a field scalar, used to
// measure hierarchy residuals without the series machinery.
template <class F>
F eval_exact(const PerturbedPolynomial& P, const F& x, const F& eps) {
    F sum = from_rational<F>(Rational(0));
    for (const auto& item : P.items()) {
        REQUIRE(is_integer(item.exponent));
        const long e = item.exponent.get_num().get_si();
        sum = sum + from_rational<F>(item.coeff) * field_pow(eps, e) * field_pow(x, item.x_degree);
    }
    return sum;
}

// Aggregates (x-degree, eps-exponent) -> coefficient for formal identity
// checks between polynomials.
std::map<std::pair<int, Rational>, Rational> item_map(
    const std::vector<PerturbedPolynomial::Item>& items) {
    std::map<std::pair<int, Rational>, Rational> m;
    for (const auto& it : items)
        m[{it.x_degree, it.exponent}] += it.coeff;
    for (auto it = m.begin(); it != m.end();)
        it = (it->second == 0) ? m.erase(it) : std::next(it);
    return m;
}

} // namespace

TEST_CASE("radical field arithmetic is exact") {
    const auto theta = Root4of2::theta();
    CHECK(field_pow(theta, 4) == Root4of2(2));
    CHECK(field_pow(theta, 5) == Root4of2(2) * theta);

    const Root4of2 a = Root4of2(1) + theta;
    CHECK(a * a.inverse() == Root4of2(1));
    CHECK((a / a) == Root4of2(1));
    CHECK(to_double(theta) == Catch::Approx(std::pow(2.0, 0.25)).epsilon(1e-15));
    CHECK_THROWS_AS(Root4of2(0).inverse(), DomainError);

    // 1/(theta - 1) = (theta^3 + theta^2 + theta + 1) / 1, since
    // (theta - 1)(theta^3 + theta^2 + theta + 1) = theta^4 - 1 = 1.
    const Root4of2 b = theta - Root4of2(1);
    const Root4of2 expect = field_pow(theta, 3) + field_pow(theta, 2) + theta + Root4of2(1);
    CHECK(b.inverse() == expect);
}

TEST_CASE("unperturbed roots of the worked polynomials") {
    const auto quad = solve_unperturbed(quadratic_root_problem());
    REQUIRE(quad.size() == 2);
    CHECK(quad[0] == Catch::Approx(0.0).margin(1e-12));
    CHECK(quad[1] == Catch::Approx(1.0).margin(1e-12));

    const auto quint = solve_unperturbed(quintic_root_problem());
    REQUIRE(quint.size() == 3);
    const double root4of2 = std::pow(2.0, 0.25);
    CHECK(quint[0] == Catch::Approx(-root4of2).margin(1e-12));
    CHECK(quint[1] == Catch::Approx(0.0).margin(1e-12));
    CHECK(quint[2] == Catch::Approx(root4of2).margin(1e-12));

    const auto linear = solve_unperturbed(singular_quadratic_problem());
    REQUIRE(linear.size() == 1);
    CHECK(linear[0] == Catch::Approx(1.0).margin(1e-14));

    // eps*x + 1: the eps=0 polynomial is the constant 1.
    CHECK_THROWS_AS(solve_unperturbed(PerturbedPolynomial{{1, 1, 1}, {0, 1, 0}}), NoRoots);
    // eps*x: identically zero at eps=0.
    CHECK_THROWS_AS(solve_unperturbed(PerturbedPolynomial{{1, 1, 1}}), DomainError);
}

TEST_CASE("quadratic hierarchy in exact rationals") {
    const auto exp = expand_root<Rational>(quadratic_root_problem(), Rational(1), 6);
    CHECK(exp.linear_operator == Rational(1));
    const std::vector<long> expected = {1, -1, -1, -2, -5, -14, -42};
    for (std::size_t n = 0; n < expected.size(); ++n)
        CHECK(exp.coeff(n) == Rational(expected[n]));
    // Every order divides by the same operator.
    REQUIRE(exp.rhs_trace.size() == 6);
    for (std::size_t p = 0; p < exp.rhs_trace.size(); ++p)
        CHECK(exp.linear_operator * exp.coeff(p + 1) + exp.rhs_trace[p] == Rational(0));
}

TEST_CASE("quadratic hierarchy in doubles matches the rational one") {
    const auto exp = expand_root<double>(quadratic_root_problem(), 1.0, 4);
    const std::vector<double> expected = {1.0, -1.0, -1.0, -2.0, -5.0};
    for (std::size_t n = 0; n < expected.size(); ++n)
        CHECK(exp.coeff(n) == Catch::Approx(expected[n]).margin(1e-12));
    CHECK(exp.linear_operator_value() == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("eps-free polynomial expands to its unperturbed root") {
    const PerturbedPolynomial P{{2, 1, 0}, {1, -1, 0}}; // x^2 - x
    const auto exp = expand_root<Rational>(P, Rational(1), 5);
    for (std::size_t n = 1; n <= 5; ++n)
        CHECK(exp.coeff(n) == Rational(0));
}

TEST_CASE("quintic hierarchy over Q(2^{1/4})") {
    const auto theta = Root4of2::theta();
    const auto exp = expand_root<Root4of2>(quintic_root_problem(), theta, 2);

    // L = 5 theta^4 - 2 = 8, identical at every order.
    CHECK(exp.linear_operator == Root4of2(8));
    CHECK(exp.coeff(1) == Root4of2(rational(-1, 8)));
    CHECK(exp.coeff(2) == Root4of2(rational(-5, 256)) * field_pow(theta, 3));

    const double a2 = -5.0 * std::pow(8.0, 0.25) / 256.0;
    CHECK(to_double(exp.coeff(2)) == Catch::Approx(a2).epsilon(1e-12));

    // Partial sum at eps = 1/10, exact in the field, then projected.
    const auto s2 = exp.evaluate(Root4of2(rational(1, 10)), 2);
    CHECK(to_double(s2) == Catch::Approx(1.176378639840512584).epsilon(1e-14));
}

TEST_CASE("quintic hierarchy in doubles stays within documented loss") {
    const double theta = std::pow(2.0, 0.25);
    const auto exp = expand_root<double>(quintic_root_problem(), theta, 2);
    CHECK(exp.coeff(1) == Catch::Approx(-0.125).margin(1e-14));
    CHECK(exp.coeff(2) == Catch::Approx(-5.0 * std::pow(8.0, 0.25) / 256.0).margin(1e-12));
}

TEST_CASE("degenerate base root is refused") {
    const PerturbedPolynomial P{{2, 1, 0}, {0, 1, 1}}; // x^2 + eps, double root at 0
    CHECK_THROWS_AS(expand_root<double>(P, 0.0, 3), SingularHierarchy);
    CHECK_THROWS_AS(expand_root<double>(quadratic_root_problem(), 0.4, 2), DomainError);
}

TEST_CASE("rescaling the singular quadratic") {
    const auto P = singular_quadratic_problem();

    const auto full = rescale(P, Rational(1));
    CHECK(item_map(full.poly.items()) ==
          item_map(PerturbedPolynomial{{2, 1, 0}, {1, 1, 0}, {0, -1, 1}}.items()));
    CHECK(full.power == Rational(1));

    const auto half = rescale(P, rational(1, 2));
    CHECK(item_map(half.poly.items()) ==
          item_map(PerturbedPolynomial{{2, 1, rational(1, 2)}, {1, 1, 0},
                                       {0, -1, rational(1, 2)}}
                       .items()));

    const auto ident = rescale(P, Rational(0));
    CHECK(item_map(ident.poly.items()) == item_map(P.items()));
    CHECK(ident.power == Rational(0));
}

TEST_CASE("rescaling round trip is a formal identity") {
    const std::vector<PerturbedPolynomial> polys = {
        quadratic_root_problem(), singular_quadratic_problem(), singular_cubic_problem()};
    const std::vector<Rational> ps = {Rational(0), rational(1, 2), Rational(1), rational(3, 4),
                                      rational(1, 3)};
    for (const auto& P : polys) {
        for (const auto& p : ps) {
            const auto rs = rescale(P, p);
            // Q(eps^p x, eps) should equal eps^q P(x, eps): substitute and
            // compare the formal (degree, exponent) -> coeff maps.
            std::map<std::pair<int, Rational>, Rational> lhs, rhs;
            for (const auto& it : rs.poly.items())
                lhs[{it.x_degree, it.exponent + p * it.x_degree}] += it.coeff;
            for (const auto& it : P.items())
                rhs[{it.x_degree, it.exponent + rs.power}] += it.coeff;
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("dominant balance exponents") {
    const auto singular = find_balance_exponents(singular_quadratic_problem());
    REQUIRE(singular.size() == 1);
    CHECK(singular[0] == Rational(1));

    CHECK(find_balance_exponents(quadratic_root_problem()).empty());

    const auto cubic = find_balance_exponents(singular_cubic_problem());
    REQUIRE(!cubic.empty());
    CHECK(std::find(cubic.begin(), cubic.end(), rational(1, 2)) != cubic.end());
}

TEST_CASE("singular expansion after p=1 rescaling") {
    const auto rs = rescale(singular_quadratic_problem(), Rational(1));
    const auto exp = expand_root<Rational>(rs.poly, Rational(-1), 2);
    CHECK(exp.coeff(0) == Rational(-1));
    CHECK(exp.coeff(1) == Rational(-1));
    CHECK(exp.coeff(2) == Rational(1));

    // y-series back in x = y/eps at eps = 0.1: -1/eps - 1 + eps.
    const auto series = exp.series();
    const double x_series = evaluate_partial_sum(series, 0.1, 2).real() / 0.1;
    CHECK(x_series == Catch::Approx(-10.900).margin(1e-12));
}

TEST_CASE("newton oracle pins the perturbed roots") {
    CHECK(exact_root_oracle(quadratic_root_problem(), 0.1, 0.89) ==
          Catch::Approx(0.887298334620741689).margin(1e-12));
    CHECK(exact_root_oracle(quintic_root_problem(), 0.1, 1.18) ==
          Catch::Approx(1.176364089002345701).margin(1e-12));

    const double closed = (-1.0 - std::sqrt(1.4)) / 0.2;
    const double singular = exact_root_oracle(singular_quadratic_problem(), 0.1, -10.9);
    CHECK(singular == Catch::Approx(closed).margin(1e-10));
    CHECK(singular == Catch::Approx(-10.916079783099616042).margin(1e-12));

    // eps = 0.5 pushes the tracked quadratic roots off the real axis.
    CHECK_THROWS_AS(exact_root_oracle(quadratic_root_problem(), 0.5, 0.9),
                    ConvergenceFailure);
}

TEST_CASE("hierarchy residual scales like eps^{N+1}") {
    const std::vector<std::pair<PerturbedPolynomial, Rational>> rational_cases = {
        {quadratic_root_problem(), Rational(1)},
        {rescale(singular_quadratic_problem(), Rational(1)).poly, Rational(-1)},
    };

    for (int N = 1; N <= 6; ++N) {
        // Quadratic about x=1 and the rescaled singular problem about y=-1,
        // both exactly rational.
        for (const auto& [poly, a0] : rational_cases) {
            const auto exp = expand_root<Rational>(poly, a0, N);
            std::vector<double> residual;
            Rational eps = rational(1, 10);
            for (int k = 0; k <= 10; ++k, eps /= 2) {
                const Rational s = exp.evaluate(eps, static_cast<std::size_t>(N));
                residual.push_back(std::abs(to_double(eval_exact(poly, s, eps))));
            }
            const double scale = std::pow(2.0, N + 1);
            for (std::size_t k = 0; k + 1 < residual.size(); ++k) {
                const double ratio = residual[k] / residual[k + 1];
                CHECK(ratio >= 0.75 * scale);
                CHECK(ratio <= 1.25 * scale);
            }
        }

        // Quintic about theta, exact in Q(2^{1/4}).
        const auto exp = expand_root<Root4of2>(quintic_root_problem(), Root4of2::theta(), N);
        std::vector<double> residual;
        Rational eps = rational(1, 10);
        for (int k = 0; k <= 10; ++k, eps /= 2) {
            const auto s = exp.evaluate(Root4of2(eps), static_cast<std::size_t>(N));
            residual.push_back(std::abs(to_double(eval_exact(quintic_root_problem(), s,
                                                             Root4of2(eps)))));
        }
        const double scale = std::pow(2.0, N + 1);
        for (std::size_t k = 0; k + 1 < residual.size(); ++k) {
            const double ratio = residual[k] / residual[k + 1];
            CHECK(ratio >= 0.75 * scale);
            CHECK(ratio <= 1.25 * scale);
        }
    }
}
