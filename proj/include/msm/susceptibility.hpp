#pragma once

#include <cmath>
#include <functional>
#include <string>

#include "msm/errors.hpp"

namespace msm {

// Frequency-domain susceptibility of a lossless medium, restricted to a
// transparency window on which chi is real and 1 + chi stays positive.
// Derivatives are supplied in closed form so dispersion coefficients can be
// evaluated without numerical differentiation.
struct SusceptibilityModel {
    std::string name;
    std::function<double(double)> chi;
    std::function<double(double)> chi_prime;
    std::function<double(double)> chi_double_prime;
    double omega_min = 0.0;
    double omega_max = 0.0;

    bool contains(double omega) const { return omega > omega_min && omega < omega_max; }
};

inline SusceptibilityModel vacuum_susceptibility() {
    SusceptibilityModel s;
    s.name = "vacuum";
    s.chi = [](double) { return 0.0; };
    s.chi_prime = [](double) { return 0.0; };
    s.chi_double_prime = [](double) { return 0.0; };
    s.omega_min = 0.0;
    s.omega_max = 1e9;
    return s;
}

// Single-resonance Lorentz oscillator chi(omega) = wp^2 / (w0^2 - omega^2),
// real below the resonance. The window stops at 0.8 w0 to keep a safe
// distance from the pole.
inline SusceptibilityModel lorentz_susceptibility(double omega0 = 10.0, double omega_p = 2.0) {
    if (!(omega0 > 0.0) || !(omega_p > 0.0))
        throw DomainError("lorentz_susceptibility: resonance and plasma frequencies "
                          "must be positive");
    SusceptibilityModel s;
    s.name = "lorentz";
    const double w0sq = omega0 * omega0;
    const double wpsq = omega_p * omega_p;
    s.chi = [=](double w) { return wpsq / (w0sq - w * w); };
    s.chi_prime = [=](double w) {
        const double d = w0sq - w * w;
        return 2.0 * wpsq * w / (d * d);
    };
    s.chi_double_prime = [=](double w) {
        const double d = w0sq - w * w;
        return 2.0 * wpsq * (w0sq + 3.0 * w * w) / (d * d * d);
    };
    s.omega_min = 0.0;
    s.omega_max = 0.8 * omega0;
    return s;
}

inline double refractive_index(const SusceptibilityModel& s, double omega) {
    if (!s.contains(omega))
        throw DomainError("refractive_index: frequency outside the transparency window");
    const double n_sq = 1.0 + s.chi(omega);
    if (!(n_sq > 0.0))
        throw DomainError("refractive_index: 1 + chi is not positive here");
    return std::sqrt(n_sq);
}

} // namespace msm
