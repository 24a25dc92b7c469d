#pragma once

#include <array>
#include <cmath>

#include "msm/errors.hpp"
#include "msm/optical_dispersion.hpp"

namespace msm {

// Coefficients of the scalar transverse-electric envelope equation
//   dA/dt + v_g dA/dx - i beta Lap A + i alpha (v_g d/dx)^2 A
//     - i gamma |A|^2 A = 0
// at a solved carrier (k, omega).
struct TECoefficients {
    double k = 0.0;
    double omega = 0.0;
    double v_g = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double eta = 0.0;
};

inline TECoefficients te_coefficients(const OpticalDispersion& d, double k, double eta) {
    auto [w, w_prime] = solve_dispersion(d, k);
    const auto& s = d.susceptibility;
    const double n_sq = 1.0 + s.chi(w);
    const double c_sq = d.c * d.c;
    const double f = n_sq + 2.0 * w * s.chi_prime(w) + 0.5 * w * w * s.chi_double_prime(w);

    TECoefficients te;
    te.k = k;
    te.omega = w;
    te.v_g = w_prime;
    te.alpha = w_prime * f / (2.0 * c_sq * k);
    te.beta = w_prime / (2.0 * k);
    te.gamma = 3.0 * eta * w * w * w_prime / (2.0 * c_sq * k);
    te.eta = eta;
    return te;
}

// Orthonormal right-handed polarization triple: E along q, B along t, and
// propagation along u = q x t.
struct Frame {
    std::array<double, 3> q{1.0, 0.0, 0.0};
    std::array<double, 3> t{0.0, 1.0, 0.0};
    std::array<double, 3> u{0.0, 0.0, 1.0};
};

namespace detail {

inline double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline std::array<double, 3> cross3(const std::array<double, 3>& a,
                                    const std::array<double, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

} // namespace detail

inline void validate_frame(const Frame& f) {
    const double tol = 1e-12;
    const bool unit = std::abs(detail::dot3(f.q, f.q) - 1.0) <= tol &&
                      std::abs(detail::dot3(f.t, f.t) - 1.0) <= tol &&
                      std::abs(detail::dot3(f.u, f.u) - 1.0) <= tol;
    const bool orth = std::abs(detail::dot3(f.q, f.t)) <= tol &&
                      std::abs(detail::dot3(f.t, f.u)) <= tol &&
                      std::abs(detail::dot3(f.u, f.q)) <= tol;
    const auto qxt = detail::cross3(f.q, f.t);
    const bool handed = std::abs(qxt[0] - f.u[0]) <= tol && std::abs(qxt[1] - f.u[1]) <= tol &&
                        std::abs(qxt[2] - f.u[2]) <= tol;
    if (!unit || !orth || !handed)
        throw PreconditionError("validate_frame: polarization triple must be orthonormal "
                                "and right-handed");
}

// Coefficients of the vector envelope equation in the omega A field
// normalization, together with the medium combinations F, G, H they are
// built from.
struct VectorCoefficients {
    double k = 0.0;
    double omega = 0.0;
    double v_g = 0.0;
    double f = 0.0;
    double g = 0.0;
    double h = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double delta1 = 0.0;
    double delta2 = 0.0;
    double eta = 0.0;
    Frame frame;
};

inline VectorCoefficients vector_coefficients(const OpticalDispersion& d, double k, double eta,
                                              const Frame& frame = Frame{}) {
    validate_frame(frame);
    auto [w, w_prime] = solve_dispersion(d, k);
    const auto& s = d.susceptibility;
    const double n_sq = 1.0 + s.chi(w);
    const double chi_p = s.chi_prime(w);
    const double c_sq = d.c * d.c;

    VectorCoefficients v;
    v.k = k;
    v.omega = w;
    v.v_g = w_prime;
    v.f = n_sq + 2.0 * w * chi_p + 0.5 * w * w * s.chi_double_prime(w);
    v.g = (w / k) * (n_sq + w * chi_p);
    v.h = w * (n_sq + w * chi_p);
    v.alpha = w_prime * v.f / (2.0 * c_sq * k);
    v.beta = w_prime / (2.0 * k);
    v.gamma = 3.0 * eta * w_prime * w * w * w * w / (2.0 * c_sq * k);
    v.delta1 = w_prime / (2.0 * w);
    v.delta2 = w_prime * v.g / (2.0 * c_sq * k);
    v.eta = eta;
    v.frame = frame;
    return v;
}

} // namespace msm
