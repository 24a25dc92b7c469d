#pragma once

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_expint.h>

#include <algorithm>
#include <cmath>
#include <memory>

#include "msm/errors.hpp"
#include "msm/series.hpp"

namespace msm {

// GSL's default error handler aborts the process; the library checks
// status codes instead. Idempotent, called by every GSL entry point.
inline void gsl_quiet() {
    static const int once = [] {
        gsl_set_error_handler_off();
        return 0;
    }();
    (void)once;
}

// f(eps) = INT_0^inf e^{-t}/(1 + eps t) dt, the function behind the
// factorial divergent series. Adaptive Gauss-Kronrod on [0, T] with
// T = 50/max(eps,1); the discarded tail is below e^{-T} <= 1.93e-22,
// so 12 significant digits survive comfortably.
inline double euler_f(double eps) {
    if (!(eps > 0))
        throw DomainError("euler_f: eps must be positive");
    gsl_quiet();

    struct Params {
        double eps;
    } params{eps};
    gsl_function f;
    f.function = [](double t, void* p) -> double {
        const double e = static_cast<Params*>(p)->eps;
        return std::exp(-t) / (1.0 + e * t);
    };
    f.params = &params;

    const double upper = 50.0 / std::max(eps, 1.0);
    std::unique_ptr<gsl_integration_workspace, void (*)(gsl_integration_workspace*)> ws(
        gsl_integration_workspace_alloc(512), gsl_integration_workspace_free);
    double result = 0.0, abserr = 0.0;
    const int status = gsl_integration_qag(&f, 0.0, upper, 0.0, 1e-13, 512, GSL_INTEG_GAUSS61,
                                           ws.get(), &result, &abserr);
    if (status != GSL_SUCCESS && status != GSL_EROUND)
        throw ConvergenceFailure("euler_f: quadrature failed, gsl status " +
                                 std::to_string(status));
    return result;
}

// Closed form (1/eps) e^{1/eps} E1(1/eps), evaluated through the scaled
// exponential integral to dodge the overflow in e^{1/eps}.
inline double euler_f_closed_form(double eps) {
    if (!(eps > 0))
        throw DomainError("euler_f_closed_form: eps must be positive");
    gsl_quiet();
    gsl_sf_result r;
    if (gsl_sf_expint_E1_scaled_e(1.0 / eps, &r) != GSL_SUCCESS)
        throw ConvergenceFailure("euler_f_closed_form: E1 evaluation failed");
    return r.val / eps;
}

// Remainder of the order-m partial sum. Expanding the geometric kernel
// under the integral sign gives the identity
//   f(eps) - S_m(eps) = (-eps)^{m+1} INT_0^inf t^{m+1} e^{-t}/(1 + eps t) dt,
// which is how the remainder is evaluated here: direct subtraction loses
// every digit once the remainder falls under the rounding floor of f.
inline double euler_remainder(double eps, int m) {
    if (!(eps > 0))
        throw DomainError("euler_remainder: eps must be positive");
    if (m < 0 || m > 20)
        throw DomainError("euler_remainder: m outside the factorial guard [0, 20]");
    gsl_quiet();

    struct Params {
        double eps;
        int power;
    } params{eps, m + 1};
    gsl_function f;
    f.function = [](double t, void* p) -> double {
        const auto* q = static_cast<Params*>(p);
        if (t <= 0.0)
            return 0.0;
        return std::exp(q->power * std::log(t) - t) / (1.0 + q->eps * t);
    };
    f.params = &params;

    // The integrand peaks at t slightly under m+1 and decays like e^{-t};
    // truncating at m+1+60 discards less than e^{-40} of the mass.
    const double upper = static_cast<double>(m + 1) + 60.0;
    std::unique_ptr<gsl_integration_workspace, void (*)(gsl_integration_workspace*)> ws(
        gsl_integration_workspace_alloc(512), gsl_integration_workspace_free);
    double result = 0.0, abserr = 0.0;
    const int status = gsl_integration_qag(&f, 0.0, upper, 0.0, 1e-13, 512, GSL_INTEG_GAUSS61,
                                           ws.get(), &result, &abserr);
    if (status != GSL_SUCCESS && status != GSL_EROUND)
        throw ConvergenceFailure("euler_remainder: quadrature failed, gsl status " +
                                 std::to_string(status));
    const double sign = (m % 2 == 0) ? -1.0 : 1.0;
    return sign * std::pow(eps, m + 1) * result;
}

// a_n = (-1)^n n!. Exact through n = 18 in double; 19 and 20 are the
// correctly rounded values. Past 20 the convention is to refuse rather
// than silently round.
inline double euler_series_coeff(int n) {
    if (n < 0)
        throw DomainError("euler_series_coeff: n must be nonnegative");
    if (n > 20)
        throw OverflowError("euler_series_coeff: n > 20 exceeds the factorial guard");
    unsigned long long fact = 1;
    for (int k = 2; k <= n; ++k)
        fact *= static_cast<unsigned long long>(k);
    const double magnitude = static_cast<double>(fact);
    return (n % 2 == 0) ? magnitude : -magnitude;
}

inline AsymptoticSeries euler_series(int max_order) {
    std::vector<double> coeffs;
    for (int n = 0; n <= max_order; ++n)
        coeffs.push_back(euler_series_coeff(n));
    return AsymptoticSeries::from_real(0, std::move(coeffs));
}

} // namespace msm
