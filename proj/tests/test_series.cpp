#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <vector>

#include "msm/euler.hpp"
#include "msm/order.hpp"
#include "msm/series.hpp"

using namespace msm;

namespace {

std::string fixed6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

double term_magnitude(const AsymptoticSeries& s, int n, double eps) {
    return std::abs(s.coeff(n)) * s.gauge().delta(n, eps);
}

} // namespace

TEST_CASE("gauge sequence ratios vanish as eps shrinks") {
    GaugeSequence gauge{GaugeKind::IntegerPowers, -1};
    for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
        for (int n = -1; n <= 4; ++n) {
            const double ratio = gauge.delta(n + 1, eps) / gauge.delta(n, eps);
            CHECK(ratio == Catch::Approx(eps).epsilon(1e-12));
        }
    }
}

TEST_CASE("partial sums reproduce the tabulated root expansions") {
    // Quadratic root series through second order.
    auto quad = AsymptoticSeries::from_real(0, {1.0, -1.0, -1.0});
    const double s2 = evaluate_partial_sum(quad, 0.1, 2).real();
    CHECK(fixed6(s2) == "0.890000");

    // Same series extended to fourth order.
    auto quad4 = AsymptoticSeries::from_real(0, {1.0, -1.0, -1.0, -2.0, -5.0});
    CHECK(evaluate_partial_sum(quad4, 0.1, 4).real() == Catch::Approx(0.8875).margin(1e-12));

    // Singular root after rescaling: leading term eps^{-1}.
    auto singular = AsymptoticSeries::from_real(-1, {-1.0, -1.0, 1.0});
    CHECK(evaluate_partial_sum(singular, 0.1, 1).real() ==
          Catch::Approx(-10.900).margin(1e-12));
}

TEST_CASE("partial sum argument checking") {
    auto s = AsymptoticSeries::from_real(0, {1.0, 2.0});
    CHECK_THROWS_AS(evaluate_partial_sum(s, 0.1, 5), IndexError);
    CHECK_THROWS_AS(evaluate_partial_sum(s, 0.1, -1), IndexError);
    CHECK_THROWS_AS(evaluate_partial_sum(s, 0.0, 1), DomainError);
    CHECK_THROWS_AS(evaluate_partial_sum(s, -0.1, 1), DomainError);
    CHECK_THROWS_AS(s.coeff(2), IndexError);
    CHECK_THROWS_AS(AsymptoticSeries::from_real(0, {}), DomainError);
}

TEST_CASE("order estimation classifies the textbook pairs") {
    const auto grid = default_order_grid();
    REQUIRE(grid.size() == 12);

    auto sin_over_eps = estimate_order([](double e) { return std::sin(e); },
                                       [](double e) { return e; }, grid);
    CHECK(sin_over_eps.classification == OrderClass::BigO);
    CHECK(sin_over_eps.ratio_trace.size() == 12);

    auto sin_sq = estimate_order([](double e) { return std::sin(e * e); },
                                 [](double e) { return e; }, grid);
    CHECK(sin_sq.classification == OrderClass::LittleO);

    auto log_vs_inv = estimate_order([](double e) { return std::log(e); },
                                     [](double e) { return 1.0 / e; }, grid);
    CHECK(log_vs_inv.classification == OrderClass::LittleO);
}

TEST_CASE("order estimation rejects bad grids and vanishing denominators") {
    auto f = [](double e) { return e; };
    CHECK_THROWS_AS(estimate_order(f, f, std::vector<double>{0.1, 0.05, 0.025}), DomainError);
    CHECK_THROWS_AS(estimate_order(f, f, std::vector<double>{0.1, 0.2, 0.1, 0.05, 0.02, 0.01}),
                    DomainError);
    auto zero_at = [](double e) { return e - 0.05; };
    CHECK_THROWS_AS(estimate_order(f, zero_at,
                                   std::vector<double>{0.1, 0.05, 0.025, 0.0125, 0.00625,
                                                       0.003125}),
                    DomainError);
}

TEST_CASE("euler integral matches its exponential-integral closed form") {
    // Frozen reference values, quadrature cross-checked against
    // (1/eps) e^{1/eps} E1(1/eps) in extended precision.
    const struct {
        double eps, value;
    } table[] = {
        {0.2, 0.8521108814236612},
        {0.1, 0.9156333393978808},
        {0.05, 0.9543709099192168},
        {0.01, 0.9901942286733018},
        {1e-4, 0.9999000199940026},
    };
    for (const auto& row : table) {
        const double quad = euler_f(row.eps);
        CHECK(quad == Catch::Approx(row.value).epsilon(1e-12));
        CHECK(euler_f_closed_form(row.eps) == Catch::Approx(quad).epsilon(1e-12));
    }
    CHECK(euler_f(1e-6) == Catch::Approx(1.0).margin(1e-5));
    CHECK_THROWS_AS(euler_f(0.0), DomainError);
    CHECK_THROWS_AS(euler_f(-1.0), DomainError);
}

TEST_CASE("euler series coefficients are signed factorials") {
    CHECK(euler_series_coeff(0) == 1.0);
    CHECK(euler_series_coeff(1) == -1.0);
    CHECK(euler_series_coeff(3) == -6.0);
    CHECK(euler_series_coeff(4) == 24.0);
    CHECK(euler_series_coeff(18) == 6402373705728000.0);
    CHECK_THROWS_AS(euler_series_coeff(21), OverflowError);
    CHECK_THROWS_AS(euler_series_coeff(-1), DomainError);
}

TEST_CASE("remainder bound holds through order 15") {
    auto series = euler_series(16);
    for (double eps : {0.2, 0.1, 0.05, 0.01}) {
        const double f = euler_f(eps);
        double fact = 1.0; // (m+1)!
        for (int m = 0; m <= 15; ++m) {
            fact *= m + 1;
            const double bound = fact * GaugeSequence::power(eps, m + 1);
            const double rm = euler_remainder(eps, m);
            CHECK(std::abs(rm) <= bound * (1.0 + 1e-12));

            // Where the remainder sits above the rounding floor of f,
            // direct subtraction must agree with the integral form.
            const double sm = evaluate_partial_sum(series, eps, m).real();
            if (bound >= 1e-10)
                CHECK(f - sm == Catch::Approx(rm).epsilon(1e-9).margin(1e-15));
        }
    }
}

TEST_CASE("remainder alternates in sign and rejects bad arguments") {
    CHECK(euler_remainder(0.1, 0) < 0.0);
    CHECK(euler_remainder(0.1, 1) > 0.0);
    CHECK(euler_remainder(0.1, 2) < 0.0);
    CHECK_THROWS_AS(euler_remainder(0.0, 3), DomainError);
    CHECK_THROWS_AS(euler_remainder(0.1, -1), DomainError);
    CHECK_THROWS_AS(euler_remainder(0.1, 21), DomainError);
}

TEST_CASE("divergence signature: term magnitudes eventually grow") {
    auto series = euler_series(20);
    const double eps = 0.1;
    int first_growth = -1;
    for (int n = series.start() + 1; n <= series.last_index(); ++n) {
        if (term_magnitude(series, n, eps) > term_magnitude(series, n - 1, eps)) {
            first_growth = n;
            break;
        }
    }
    REQUIRE(first_growth > 0);
    for (int n = first_growth; n <= series.last_index(); ++n)
        CHECK(term_magnitude(series, n, eps) >= term_magnitude(series, n - 1, eps));
    // Past the turnover the expansion only gets worse.
    CHECK(term_magnitude(series, 20, eps) > term_magnitude(series, first_growth, eps));
}

TEST_CASE("optimal truncation minimizes the term magnitude") {
    auto series = euler_series(20);
    const double eps = 0.1;
    const int m = optimal_truncation(series, eps);

    // Brute-force oracle: strict decrease up to m, growth right after.
    for (int n = series.start() + 1; n <= m; ++n)
        CHECK(term_magnitude(series, n, eps) < term_magnitude(series, n - 1, eps));
    REQUIRE(m < series.last_index());
    CHECK(term_magnitude(series, m + 1, eps) > term_magnitude(series, m, eps));

    auto geometric = AsymptoticSeries::from_real(0, std::vector<double>(8, 1.0));
    CHECK(optimal_truncation(geometric, 0.5) == 7);

    auto single = AsymptoticSeries::from_real(3, {4.0});
    CHECK(optimal_truncation(single, 0.1) == 3);
}

TEST_CASE("series coefficients recovered from euler_f by limits") {
    // Richardson on a ratio-10 grid removes the linear term, then the
    // first-order coefficient comes from the difference quotient.
    const double f4 = euler_f(1e-4);
    const double f5 = euler_f(1e-5);
    const double a0 = (10.0 * f5 - f4) / 9.0;
    CHECK(a0 == Catch::Approx(1.0).margin(1e-3));
    const double a1 = (f5 - a0) / 1e-5;
    CHECK(a1 == Catch::Approx(-1.0).margin(1e-3));
}
