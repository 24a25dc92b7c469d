#pragma once

#include <cmath>
#include <utility>

#include "msm/dispersion.hpp"
#include "msm/errors.hpp"
#include "msm/susceptibility.hpp"

namespace msm {

// Medium description for the optical dispersion relation
// omega^2 n^2(omega) = c^2 k^2 with n^2 = 1 + chi(omega).
struct OpticalDispersion {
    SusceptibilityModel susceptibility;
    double c = 1.0;
};

inline OpticalDispersion vacuum_dispersion(double c = 1.0) {
    return {vacuum_susceptibility(), c};
}

inline OpticalDispersion lorentz_dispersion(double omega0 = 10.0, double omega_p = 2.0,
                                            double c = 1.0) {
    return {lorentz_susceptibility(omega0, omega_p), c};
}

// Solves omega^2 (1 + chi(omega)) = c^2 k^2 for the branch continued from
// the vacuum line omega = c k, and returns (omega, omega').  The group
// velocity comes from differentiating the dispersion relation:
//   omega (2 n^2 + omega chi'(omega)) omega' = 2 c^2 k.
inline std::pair<double, double> solve_dispersion(const OpticalDispersion& d, double k) {
    if (!(k > 0.0))
        throw DomainError("solve_dispersion: wavenumber must be positive");
    const auto& s = d.susceptibility;
    const double target = d.c * d.c * k * k;

    const double margin = 1e-12 * (s.omega_max - s.omega_min);
    const auto clamp = [&](double w) {
        return std::min(std::max(w, s.omega_min + margin), s.omega_max - margin);
    };

    // Fixed-point continuation omega <- c k / n(omega) from the vacuum
    // start, then Newton on F(omega) = omega^2 n^2 - c^2 k^2.
    double w = clamp(d.c * k);
    for (int i = 0; i < 8; ++i)
        w = clamp(d.c * k / std::sqrt(1.0 + s.chi(w)));

    bool converged = false;
    for (int i = 0; i < 60; ++i) {
        const double n_sq = 1.0 + s.chi(w);
        const double f = w * w * n_sq - target;
        if (std::abs(f) <= 1e-13 * std::max(1.0, target)) {
            converged = true;
            break;
        }
        const double df = w * (2.0 * n_sq + w * s.chi_prime(w));
        if (!(df > 0.0) || !std::isfinite(df))
            break;
        const double next = w - f / df;
        if (!s.contains(next)) {
            // The Newton step leaving the window means the branch has no
            // root here (F is monotone on the physical branch).
            converged = false;
            break;
        }
        w = next;
    }
    if (!converged)
        throw BranchFailure("solve_dispersion: no branch root inside the transparency window");

    const double n_sq = 1.0 + s.chi(w);
    const double w_prime = 2.0 * d.c * d.c * k / (w * (2.0 * n_sq + w * s.chi_prime(w)));
    return {w, w_prime};
}

// Adapter so the optical branch can drive the generic envelope machinery.
// Derivative callables re-solve at the requested wavenumber; the second
// derivative uses a central difference of the closed-form omega'.
inline DispersionRelation optical_branch(const OpticalDispersion& d, double k_min, double k_max) {
    if (!(k_min > 0.0) || !(k_max > k_min))
        throw DomainError("optical_branch: need 0 < k_min < k_max");
    DispersionRelation r;
    r.name = d.susceptibility.name + "-branch";
    r.k_min = k_min;
    r.k_max = k_max;
    r.omega = [d](double k) { return solve_dispersion(d, k).first; };
    r.omega_prime = [d](double k) { return solve_dispersion(d, k).second; };
    r.omega_double_prime = [d](double k) {
        const double h = 1e-5 * std::max(1.0, std::abs(k));
        return (solve_dispersion(d, k + h).second - solve_dispersion(d, k - h).second) /
               (2.0 * h);
    };
    return r;
}

} // namespace msm
