#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "msm/errors.hpp"

namespace msm {

// Closed-form dispersion relation with its first two derivatives and the
// wavenumber interval on which it is valid.
struct DispersionRelation {
    std::string name;
    std::function<double(double)> omega;
    std::function<double(double)> omega_prime;
    std::function<double(double)> omega_double_prime;
    double k_min = 0.0;
    double k_max = 0.0;

    bool contains(double k) const { return k >= k_min && k <= k_max; }
};

// omega = sqrt(1 + k^2), from the second-order wave operator with a mass
// term.
inline DispersionRelation klein_gordon_dispersion() {
    DispersionRelation d;
    d.name = "klein-gordon";
    d.omega = [](double k) { return std::sqrt(1.0 + k * k); };
    d.omega_prime = [](double k) { return k / std::sqrt(1.0 + k * k); };
    d.omega_double_prime = [](double k) {
        const double w = std::sqrt(1.0 + k * k);
        return 1.0 / (w * w * w);
    };
    d.k_min = -1e9;
    d.k_max = 1e9;
    return d;
}

// omega = sqrt(k^4 - k^2 + 1), from the operator with a fourth x-derivative;
// the radicand is (k^2 - 1/2)^2 + 3/4, positive for every real k.
inline DispersionRelation fourth_order_dispersion() {
    DispersionRelation d;
    d.name = "fourth-order";
    d.omega = [](double k) {
        const double k2 = k * k;
        return std::sqrt(k2 * k2 - k2 + 1.0);
    };
    d.omega_prime = [](double k) {
        const double k2 = k * k;
        return (2.0 * k2 * k - k) / std::sqrt(k2 * k2 - k2 + 1.0);
    };
    d.omega_double_prime = [](double k) {
        const double k2 = k * k;
        const double w = std::sqrt(k2 * k2 - k2 + 1.0);
        const double wp = (2.0 * k2 * k - k) / w;
        return (6.0 * k2 - 1.0) / w - wp * wp / w;
    };
    d.k_min = -1e9;
    d.k_max = 1e9;
    return d;
}

inline std::pair<double, double> dispersion_eval(const DispersionRelation& d, double k) {
    if (!d.contains(k))
        throw DomainError("dispersion_eval: k outside the validity domain");
    return {d.omega(k), d.omega_prime(k)};
}

// All k in [k_lo, k_hi] with omega(n k) = n omega(k): scan g(k) =
// omega(nk) - n omega(k) on a uniform grid for sign changes, then bisect
// each bracket down to 1e-10.
inline std::vector<double> phase_matching_scan(const DispersionRelation& d, int n, double k_lo,
                                               double k_hi) {
    if (n < 2)
        throw DomainError("phase_matching_scan: harmonic index must be at least 2");
    if (!(k_lo < k_hi))
        throw DomainError("phase_matching_scan: empty wavenumber interval");
    if (!d.contains(k_lo) || !d.contains(k_hi) || !d.contains(n * k_lo) || !d.contains(n * k_hi))
        throw DomainError("phase_matching_scan: interval leaves the validity domain");

    const auto g = [&](double k) { return d.omega(n * k) - n * d.omega(k); };
    const int cells = 10000;
    const double h = (k_hi - k_lo) / cells;

    std::vector<double> roots;
    double xa = k_lo, ga = g(xa);
    for (int i = 1; i <= cells; ++i) {
        const double xb = k_lo + i * h;
        const double gb = g(xb);
        if (ga == 0.0)
            roots.push_back(xa);
        else if (ga * gb < 0.0) {
            double lo = xa, hi = xb, glo = ga;
            while (hi - lo > 1e-10) {
                const double mid = 0.5 * (lo + hi);
                const double gm = g(mid);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (glo * gm < 0.0)
                    hi = mid;
                else {
                    lo = mid;
                    glo = gm;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        xa = xb;
        ga = gb;
    }
    if (ga == 0.0)
        roots.push_back(xa);
    return roots;
}

} // namespace msm
