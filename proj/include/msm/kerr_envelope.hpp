#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "msm/envelope.hpp"
#include "msm/errors.hpp"
#include "msm/fft.hpp"
#include "msm/optics_coefficients.hpp"
#include "msm/split_step.hpp"

namespace msm {

// ---- planar grid and field --------------------------------------------------

// Periodic box with x along the propagation axis and y transverse to it.
// Values are stored row-major, index j*nx + i for node (x_i, y_j).
struct Grid2D {
    std::size_t nx = 0;
    std::size_t ny = 0;
    double lx = 0.0;
    double ly = 0.0;

    double dx() const { return lx / static_cast<double>(nx); }
    double dy() const { return ly / static_cast<double>(ny); }
    double node_x(std::size_t i) const { return static_cast<double>(i) * dx(); }
    double node_y(std::size_t j) const { return static_cast<double>(j) * dy(); }
};

struct EnvelopeField2D {
    Grid2D grid;
    std::vector<std::complex<double>> values;
    double carrier_k = 0.0;
    double carrier_omega = 0.0;
};

inline double envelope_band_fraction(const EnvelopeField2D& a) {
    const std::size_t nx = a.grid.nx, ny = a.grid.ny;
    Fft2D fft(ny, nx);
    auto hat = fft.forward(a.values);
    double total = 0.0, high = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
        const auto sj = static_cast<long>(j);
        const long wy = 2 * sj <= static_cast<long>(ny) ? sj : sj - static_cast<long>(ny);
        for (std::size_t i = 0; i < nx; ++i) {
            const auto si = static_cast<long>(i);
            const long wx = 2 * si <= static_cast<long>(nx) ? si : si - static_cast<long>(nx);
            const double p = std::norm(hat[j * nx + i]);
            total += p;
            if (4 * std::abs(wx) > static_cast<long>(nx) ||
                4 * std::abs(wy) > static_cast<long>(ny))
                high += p;
        }
    }
    return total > 0.0 ? high / total : 0.0;
}

inline void validate_envelope(const EnvelopeField2D& a) {
    if (!is_power_of_two(a.grid.nx) || !is_power_of_two(a.grid.ny) ||
        a.values.size() != a.grid.nx * a.grid.ny)
        throw PreconditionError("validate_envelope: grid must be powers of two matching "
                                "the value array");
    if (a.grid.nx > 256 || a.grid.ny > 256)
        throw PreconditionError("validate_envelope: planar grids are capped at 256 x 256");
    if (!(a.grid.lx > 0.0) || !(a.grid.ly > 0.0))
        throw PreconditionError("validate_envelope: box lengths must be positive");
    if (envelope_band_fraction(a) >= 1e-8)
        throw PreconditionError("validate_envelope: field is not band limited to the "
                                "resolved envelope scales");
}

inline double envelope_mass(const EnvelopeField2D& a) {
    double s = 0.0;
    for (const auto& z : a.values)
        s += std::norm(z);
    return s * a.grid.dx() * a.grid.dy();
}

// ---- scaling assertions ------------------------------------------------------

namespace detail {

inline void check_envelope_scaling(double grad_ratio, double kerr_shift, double eps, double k,
                                   double omega) {
    if (!(eps > 0.0) || !(eps <= 0.5))
        throw DomainError("te_amplitude_solve: eps must lie in (0, 0.5]");
    if (grad_ratio > 2.0 * eps * k)
        throw PreconditionError("te_amplitude_solve: envelope gradient breaks the slow "
                                "spatial scaling |grad A|/|A| <= 2 eps k");
    if (kerr_shift > 2.0 * eps * eps * omega)
        throw PreconditionError("te_amplitude_solve: Kerr phase rate breaks the scaling "
                                "gamma |A|^2 <= 2 eps^2 omega");
}

} // namespace detail

// ---- TE envelope propagation -------------------------------------------------

// Split-step integration of
//   dA/dt + v_g dA/dx - i beta Lap A + i alpha (v_g d/dx)^2 A
//     - i gamma |A|^2 A = 0.
// The whole linear operator is diagonal in spectral space and advanced
// exactly; the Kerr substep is an exact phase rotation. Setup asserts the
// slow-envelope scaling against the declared eps.
inline EnvelopeTrajectory te_amplitude_solve(const TECoefficients& te, const EnvelopeField& a0,
                                             double eps, double t_end, double dt,
                                             std::size_t record_every = 0) {
    validate_envelope(a0);
    {
        Fft1D fft(a0.grid.n);
        auto hat = fft.forward(a0.values);
        const auto kappa = dft_wavenumbers(a0.grid.n, a0.grid.length);
        double num = 0.0, den = 0.0, peak = 0.0;
        for (std::size_t i = 0; i < hat.size(); ++i) {
            num += kappa[i] * kappa[i] * std::norm(hat[i]);
            den += std::norm(hat[i]);
        }
        for (const auto& z : a0.values)
            peak = std::max(peak, std::norm(z));
        detail::check_envelope_scaling(den > 0.0 ? std::sqrt(num / den) : 0.0,
                                       std::abs(te.gamma) * peak, eps, te.k, te.omega);
    }
    const auto symbol = envelope_symbol(a0.grid, te.v_g, te.beta, te.alpha);
    return strang_solve(a0, symbol, kerr_rotation(te.gamma), t_end, dt, record_every);
}

struct EnvelopeTrajectory2D {
    std::vector<double> times;
    std::vector<EnvelopeField2D> fields;
    std::size_t steps = 0;

    const EnvelopeField2D& final_field() const { return fields.back(); }
};

inline EnvelopeTrajectory2D te_amplitude_solve(const TECoefficients& te,
                                               const EnvelopeField2D& a0, double eps,
                                               double t_end, double dt,
                                               std::size_t record_every = 0) {
    validate_envelope(a0);
    if (!(t_end > 0.0))
        throw DomainError("te_amplitude_solve: horizon must be positive");
    if (!(dt > 0.0) || dt > 0.5)
        throw PreconditionError("te_amplitude_solve: step must lie in (0, 0.5]");

    const std::size_t nx = a0.grid.nx, ny = a0.grid.ny;
    const auto kx = dft_wavenumbers(nx, a0.grid.lx);
    const auto ky = dft_wavenumbers(ny, a0.grid.ly);

    {
        Fft2D fft(ny, nx);
        auto hat = fft.forward(a0.values);
        double num = 0.0, den = 0.0, peak = 0.0;
        for (std::size_t j = 0; j < ny; ++j)
            for (std::size_t i = 0; i < nx; ++i) {
                const double k_sq = kx[i] * kx[i] + ky[j] * ky[j];
                num += k_sq * std::norm(hat[j * nx + i]);
                den += std::norm(hat[j * nx + i]);
            }
        for (const auto& z : a0.values)
            peak = std::max(peak, std::norm(z));
        detail::check_envelope_scaling(den > 0.0 ? std::sqrt(num / den) : 0.0,
                                       std::abs(te.gamma) * peak, eps, te.k, te.omega);
    }

    std::vector<std::complex<double>> symbol(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
        for (std::size_t i = 0; i < nx; ++i) {
            const double lap = kx[i] * kx[i] + ky[j] * ky[j];
            const double im = -te.v_g * kx[i] - te.beta * lap +
                              te.alpha * te.v_g * te.v_g * kx[i] * kx[i];
            symbol[j * nx + i] = {0.0, im};
        }

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    const auto rotate = kerr_rotation(te.gamma);
    Fft2D fft(ny, nx);

    EnvelopeTrajectory2D out;
    out.times.push_back(0.0);
    out.fields.push_back(a0);

    auto field = a0;
    double t = 0.0;
    std::vector<std::complex<double>> half(nx * ny);
    for (std::size_t s = 0; s < n_steps; ++s) {
        const double h = std::min(dt, t_end - t);
        for (std::size_t m = 0; m < symbol.size(); ++m)
            half[m] = std::exp(symbol[m] * (0.5 * h));

        auto hat = fft.forward(field.values);
        for (std::size_t m = 0; m < hat.size(); ++m)
            hat[m] *= half[m];
        field.values = fft.inverse(hat);
        rotate(field.values, h);
        hat = fft.forward(field.values);
        for (std::size_t m = 0; m < hat.size(); ++m)
            hat[m] *= half[m];
        field.values = fft.inverse(hat);

        t += h;
        ++out.steps;
        if (!std::isfinite(field.values[0].real()))
            throw DivergenceFailure("te_amplitude_solve: field lost finiteness");
        if (record_every != 0 && (s + 1) % record_every == 0 && t < t_end) {
            out.times.push_back(t);
            out.fields.push_back(field);
        }
    }
    out.times.push_back(t_end);
    out.fields.push_back(std::move(field));
    return out;
}

// ---- electromagnetic reconstruction -------------------------------------------

struct EMField1D {
    Grid1D grid;
    std::vector<std::array<double, 3>> e;
    std::vector<std::array<double, 3>> b;
};

struct EMField2D {
    Grid2D grid;
    std::vector<std::array<double, 3>> e;
    std::vector<std::array<double, 3>> b;
};

namespace detail {

inline std::vector<std::complex<double>> spectral_dx_1d(const std::vector<std::complex<double>>& a,
                                                        double length) {
    Fft1D fft(a.size());
    auto hat = fft.forward(a);
    const auto kappa = dft_wavenumbers(a.size(), length);
    for (std::size_t i = 0; i < hat.size(); ++i)
        hat[i] *= std::complex<double>(0.0, kappa[i]);
    return fft.inverse(hat);
}

// axis 0: x (contiguous index), axis 1: y (row index)
inline std::vector<std::complex<double>> spectral_d_2d(const std::vector<std::complex<double>>& a,
                                                       const Grid2D& g, int axis) {
    Fft2D fft(g.ny, g.nx);
    auto hat = fft.forward(a);
    const auto kx = dft_wavenumbers(g.nx, g.lx);
    const auto ky = dft_wavenumbers(g.ny, g.ly);
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i)
            hat[j * g.nx + i] *= std::complex<double>(0.0, axis == 0 ? kx[i] : ky[j]);
    return fft.inverse(hat);
}

inline std::array<double, 3> scaled(const std::array<double, 3>& v, double s) {
    return {s * v[0], s * v[1], s * v[2]};
}

inline std::array<double, 3> added(const std::array<double, 3>& a,
                                   const std::array<double, 3>& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

} // namespace detail

// Scalar TE reconstruction: E = A e^{i theta} + c.c. along q and the
// matching leading-order magnetic field (k/omega) A e^{i theta} + c.c.
// along t, with theta = k x - omega t measured along the propagation
// axis u.
inline EMField1D reconstruct_EB(const TECoefficients& te, const EnvelopeField& a, double t,
                                const Frame& frame = Frame{}) {
    validate_frame(frame);
    EMField1D out;
    out.grid = a.grid;
    out.e.resize(a.values.size());
    out.b.resize(a.values.size());
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double theta = te.k * a.grid.node(i) - te.omega * t;
        const std::complex<double> phase(std::cos(theta), std::sin(theta));
        const double envelope = 2.0 * (a.values[i] * phase).real();
        out.e[i] = detail::scaled(frame.q, envelope);
        out.b[i] = detail::scaled(frame.t, (te.k / te.omega) * envelope);
    }
    return out;
}

// Vector reconstruction on a 1D grid along the propagation axis:
//   E = [omega A + i (omega/k - omega') (u . grad A)] q e^{i theta} + c.c.
//   B = [k A t + i (t . grad A) u] e^{i theta} + c.c.
// Transverse derivatives vanish on this grid, so only the u-derivative
// enters.
inline EMField1D reconstruct_EB(const VectorCoefficients& v, const EnvelopeField& a, double t) {
    const auto da = detail::spectral_dx_1d(a.values, a.grid.length);
    EMField1D out;
    out.grid = a.grid;
    out.e.resize(a.values.size());
    out.b.resize(a.values.size());
    const std::complex<double> iunit(0.0, 1.0);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double theta = v.k * a.grid.node(i) - v.omega * t;
        const std::complex<double> phase(std::cos(theta), std::sin(theta));
        const auto e_q = v.omega * a.values[i] + iunit * (v.omega / v.k - v.v_g) * da[i];
        out.e[i] = detail::scaled(v.frame.q, 2.0 * (e_q * phase).real());
        out.b[i] = detail::scaled(v.frame.t, 2.0 * (v.k * a.values[i] * phase).real());
    }
    return out;
}

// Vector reconstruction on a planar grid whose x axis lies along the
// propagation direction u and whose y axis lies along the magnetic axis t.
inline EMField2D reconstruct_EB(const VectorCoefficients& v, const EnvelopeField2D& a,
                                double t) {
    const auto du = detail::spectral_d_2d(a.values, a.grid, 0);
    const auto dt_a = detail::spectral_d_2d(a.values, a.grid, 1);
    EMField2D out;
    out.grid = a.grid;
    out.e.resize(a.values.size());
    out.b.resize(a.values.size());
    const std::complex<double> iunit(0.0, 1.0);
    for (std::size_t j = 0; j < a.grid.ny; ++j)
        for (std::size_t i = 0; i < a.grid.nx; ++i) {
            const std::size_t m = j * a.grid.nx + i;
            const double theta = v.k * a.grid.node_x(i) - v.omega * t;
            const std::complex<double> phase(std::cos(theta), std::sin(theta));
            const auto e_q = v.omega * a.values[m] + iunit * (v.omega / v.k - v.v_g) * du[m];
            out.e[m] = detail::scaled(v.frame.q, 2.0 * (e_q * phase).real());
            const auto b_t = detail::scaled(v.frame.t, 2.0 * (v.k * a.values[m] * phase).real());
            const auto b_u = detail::scaled(v.frame.u, 2.0 * (iunit * dt_a[m] * phase).real());
            out.b[m] = detail::added(b_t, b_u);
        }
    return out;
}

// ---- resonance bookkeeping -----------------------------------------------------

struct Carrier {
    std::array<double, 3> k{0.0, 0.0, 0.0};
    double omega = 0.0;
};

// True iff carrier `target` matches the signed combination of the three
// listed carriers in both wavevector and frequency to within tol.
inline bool check_resonance(const std::vector<Carrier>& carriers, std::size_t target,
                            const std::array<std::size_t, 3>& triple,
                            const std::array<int, 3>& signs, double tol) {
    if (!(tol > 0.0))
        throw DomainError("check_resonance: tolerance must be positive");
    if (target >= carriers.size())
        throw IndexError("check_resonance: target index out of range");
    for (std::size_t idx : triple)
        if (idx >= carriers.size())
            throw IndexError("check_resonance: triple index out of range");

    std::array<double, 3> k_sum{0.0, 0.0, 0.0};
    double w_sum = 0.0;
    for (int m = 0; m < 3; ++m) {
        const auto& c = carriers[triple[static_cast<std::size_t>(m)]];
        const double s = signs[static_cast<std::size_t>(m)];
        for (int d = 0; d < 3; ++d)
            k_sum[static_cast<std::size_t>(d)] += s * c.k[static_cast<std::size_t>(d)];
        w_sum += s * c.omega;
    }
    const auto& tk = carriers[target].k;
    const double dk = std::sqrt((tk[0] - k_sum[0]) * (tk[0] - k_sum[0]) +
                                (tk[1] - k_sum[1]) * (tk[1] - k_sum[1]) +
                                (tk[2] - k_sum[2]) * (tk[2] - k_sum[2]));
    return dk <= tol && std::abs(carriers[target].omega - w_sum) <= tol;
}

} // namespace msm
