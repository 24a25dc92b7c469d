#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "msm/dispersion.hpp"
#include "msm/envelope.hpp"
#include "msm/errors.hpp"
#include "msm/fft.hpp"
#include "msm/split_step.hpp"
#include "msm/wave_reference.hpp"

namespace msm {

// Envelope model for a single carrier: dA/dt = -v_g dA/dx
// + i beta2 dA/dxx + i kerr eps^kerr_eps_power |A|^2 A, together with the
// harmonics needed to rebuild the real field.
struct EnvelopePDEModel {
    struct Harmonic {
        int index = 1;      // multiplies the carrier phase
        int eps_power = 0;  // explicit power of eps on the term
        std::function<std::complex<double>(std::complex<double>)> coeff;
    };

    std::string name;
    DispersionRelation dispersion;
    double carrier_k = 0.0;
    double carrier_omega = 0.0;
    double v_g = 0.0;
    double beta2 = 0.0;
    double kerr = 0.0;
    int kerr_eps_power = 1;
    std::vector<Harmonic> harmonics;
};

// Envelope model for u_tt - u_xx + u = eps u^2:
// dA/dt = -(k/w) dA/dx + (i/2w^3) dA/dxx + i eps^2 (5/3w) |A|^2 A, with the
// order-eps DC and second-harmonic corrections in the reconstruction.
inline EnvelopePDEModel kg_envelope_model(double k) {
    EnvelopePDEModel m;
    m.name = "klein-gordon";
    m.dispersion = klein_gordon_dispersion();
    m.carrier_k = k;
    m.carrier_omega = m.dispersion.omega(k);
    m.v_g = m.dispersion.omega_prime(k);
    const double w = m.carrier_omega;
    m.beta2 = 1.0 / (2.0 * w * w * w);
    m.kerr = 5.0 / (3.0 * w);
    m.kerr_eps_power = 2;
    m.harmonics = {
        {1, 0, [](std::complex<double> a) { return a; }},
        {0, 1, [](std::complex<double> a) { return std::complex<double>(2.0 * std::norm(a), 0.0); }},
        {2, 1, [](std::complex<double> a) { return -a * a / 3.0; }},
    };
    return m;
}

// Envelope model for u_tt + u_xx + u_xxxx + u = eps u^3 away from phase
// matching: dA/dt = -w' dA/dx + i eps (3/2w) |A|^2 A, leading-order
// reconstruction only.
inline EnvelopePDEModel fourth_order_envelope_model(double k) {
    EnvelopePDEModel m;
    m.name = "fourth-order";
    m.dispersion = fourth_order_dispersion();
    m.carrier_k = k;
    m.carrier_omega = m.dispersion.omega(k);
    m.v_g = m.dispersion.omega_prime(k);
    m.beta2 = 0.0;
    m.kerr = 3.0 / (2.0 * m.carrier_omega);
    m.kerr_eps_power = 1;
    m.harmonics = {{1, 0, [](std::complex<double> a) { return a; }}};
    return m;
}

inline EnvelopeTrajectory nls_solve(const EnvelopePDEModel& model, const EnvelopeField& a0,
                                    double eps, double t_end, double dt,
                                    std::size_t record_every = 0) {
    double gamma = model.kerr;
    for (int p = 0; p < model.kerr_eps_power; ++p)
        gamma *= eps;
    const auto symbol = envelope_symbol(a0.grid, model.v_g, model.beta2);
    return strang_solve(a0, symbol, kerr_rotation(gamma), t_end, dt, record_every);
}

// ---- coupled phase-matched pair -----------------------------------------

struct CoupledTrajectory {
    std::vector<double> times;
    std::vector<EnvelopeField> a_fields;
    std::vector<EnvelopeField> b_fields;
    std::size_t steps = 0;
};

// Integral of w(k)|A|^2 + w(3k)|B|^2 / 3 over the grid; tracked as a power
// proxy, not asserted conserved.
inline double coupled_power_proxy(const EnvelopePDEModel& model, const EnvelopeField& a,
                                  const EnvelopeField& b) {
    const double w1 = model.carrier_omega;
    const double w3 = model.dispersion.omega(3.0 * model.carrier_k);
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        s += w1 * std::norm(a.values[i]) + w3 * std::norm(b.values[i]) / 3.0;
    return s * a.grid.dx();
}

// Two envelopes at carriers k and 3k for the fourth-order equation at a
// phase-matched wavenumber. Strang splitting with the advection applied
// exactly per envelope; the coupled cubic terms
//   dA/dt = i eps/(2 w(k))  (3|A|^2 A + 6|B|^2 A + 3 conj(A)^2 B)
//   dB/dt = i eps/(2 w(3k)) (3|B|^2 B + 6|A|^2 B + A^3)
// have no closed form, so the nonlinear substep is one classical RK4 step.
inline CoupledTrajectory coupled_solve(const EnvelopePDEModel& model, const EnvelopeField& a0,
                                       const EnvelopeField& b0, double eps, double t_end,
                                       double dt, std::size_t record_every = 0) {
    const auto matched =
        phase_matching_scan(model.dispersion, 3, 0.5 * model.carrier_k, 2.0 * model.carrier_k);
    bool ok = false;
    for (double r : matched)
        ok = ok || std::abs(r - model.carrier_k) <= 1e-8;
    if (!ok)
        throw PreconditionError("coupled_solve: carrier is not phase matched");

    validate_envelope(a0);
    validate_envelope(b0);
    if (a0.grid.n != b0.grid.n || a0.grid.length != b0.grid.length)
        throw DomainError("coupled_solve: envelope grids differ");
    if (!(dt > 0.0) || dt > 0.5)
        throw PreconditionError("coupled_solve: dt must lie in (0, 0.5]");
    if (!(t_end > 0.0))
        throw DomainError("coupled_solve: horizon must be positive");

    const std::size_t n = a0.grid.n;
    const double w1 = model.carrier_omega;
    const double k = model.carrier_k;
    const double w3 = model.dispersion.omega(3.0 * k);
    const auto symbol_a = envelope_symbol(a0.grid, model.dispersion.omega_prime(k), 0.0);
    const auto symbol_b = envelope_symbol(a0.grid, model.dispersion.omega_prime(3.0 * k), 0.0);

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    const double h = t_end / static_cast<double>(n_steps);

    std::vector<std::complex<double>> half_a(n), half_b(n);
    for (std::size_t j = 0; j < n; ++j) {
        half_a[j] = std::exp(0.5 * h * symbol_a[j]);
        half_b[j] = std::exp(0.5 * h * symbol_b[j]);
    }

    using C = std::complex<double>;
    const C ia = C(0.0, eps / (2.0 * w1));
    const C ib = C(0.0, eps / (2.0 * w3));
    const auto fa = [&](C a, C b) {
        return ia * (3.0 * std::norm(a) * a + 6.0 * std::norm(b) * a + 3.0 * std::conj(a) * std::conj(a) * b);
    };
    const auto fb = [&](C a, C b) {
        return ib * (3.0 * std::norm(b) * b + 6.0 * std::norm(a) * b + a * a * a);
    };

    Fft1D fft(n);
    auto av = a0.values;
    auto bv = b0.values;
    const auto linear_half = [&]() {
        auto sa = fft.forward(av);
        auto sb = fft.forward(bv);
        for (std::size_t j = 0; j < n; ++j) {
            sa[j] *= half_a[j];
            sb[j] *= half_b[j];
        }
        av = fft.inverse(sa);
        bv = fft.inverse(sb);
    };

    CoupledTrajectory run;
    const auto snapshot = [&](double t) {
        EnvelopeField a = a0, b = b0;
        a.values = av;
        b.values = bv;
        run.times.push_back(t);
        run.a_fields.push_back(std::move(a));
        run.b_fields.push_back(std::move(b));
    };
    snapshot(0.0);

    for (std::size_t step = 0; step < n_steps; ++step) {
        linear_half();
        for (std::size_t i = 0; i < n; ++i) {
            const C a = av[i], b = bv[i];
            const C k1a = fa(a, b), k1b = fb(a, b);
            const C k2a = fa(a + 0.5 * h * k1a, b + 0.5 * h * k1b);
            const C k2b = fb(a + 0.5 * h * k1a, b + 0.5 * h * k1b);
            const C k3a = fa(a + 0.5 * h * k2a, b + 0.5 * h * k2b);
            const C k3b = fb(a + 0.5 * h * k2a, b + 0.5 * h * k2b);
            const C k4a = fa(a + h * k3a, b + h * k3b);
            const C k4b = fb(a + h * k3a, b + h * k3b);
            av[i] = a + h / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
            bv[i] = b + h / 6.0 * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        }
        linear_half();
        if (!std::isfinite(av[0].real()) || !std::isfinite(bv[0].real()))
            throw DivergenceFailure("coupled_solve: NaN detected");
        const double t = h * static_cast<double>(step + 1);
        if (record_every != 0 && (step + 1) % record_every == 0 && step + 1 != n_steps)
            snapshot(t);
    }
    run.steps = n_steps;
    snapshot(t_end);
    return run;
}

// ---- reconstruction ------------------------------------------------------

namespace detail {
inline std::vector<std::complex<double>> spectral_derivative(const EnvelopeField& a) {
    Fft1D fft(a.values.size());
    auto spec = fft.forward(a.values);
    const auto kappa = dft_wavenumbers(a.grid.n, a.grid.length);
    for (std::size_t j = 0; j < spec.size(); ++j)
        spec[j] *= std::complex<double>(0.0, kappa[j]);
    return fft.inverse(spec);
}
} // namespace detail

// Real field u(x, t) from the envelope and the model's harmonic table:
// u = sum over harmonics of coeff(A) eps^p e^{i n (kx - w t)} + c.c.
// (self-conjugate DC terms are added once). The paired v = du/dt uses the
// transport approximation dA/dt ~ -v_g dA/dx, consistent to the order the
// envelope itself is valid.
inline WaveField reconstruct_field(const EnvelopePDEModel& model, const EnvelopeField& a,
                                   double eps, double t) {
    const std::size_t n = a.grid.n;
    WaveField f;
    f.grid = a.grid;
    f.u.assign(n, 0.0);
    f.v.assign(n, 0.0);

    const double k = model.carrier_k;
    const double w = model.carrier_omega;
    const auto da = detail::spectral_derivative(a);

    for (std::size_t i = 0; i < n; ++i) {
        const double x = a.grid.node(i);
        const double theta = k * x - w * t;
        std::complex<double> u = 0.0;
        for (const auto& harm : model.harmonics) {
            std::complex<double> term = harm.coeff(a.values[i]);
            for (int p = 0; p < harm.eps_power; ++p)
                term *= eps;
            if (harm.index == 0) {
                u += term; // real DC term, no conjugate partner
                continue;
            }
            term *= std::exp(std::complex<double>(0.0, harm.index * theta));
            u += term + std::conj(term);
        }
        f.u[i] = u.real();
        const std::complex<double> vc =
            (std::complex<double>(0.0, -w) * a.values[i] - model.v_g * da[i]) *
            std::exp(std::complex<double>(0.0, theta));
        f.v[i] = 2.0 * vc.real();
    }
    return f;
}

// Same for the two-carrier expansion u = A e^{i theta} + B e^{3 i theta}
// + c.c.; v pairs each envelope with its own group velocity.
inline WaveField reconstruct_coupled_field(const EnvelopePDEModel& model, const EnvelopeField& a,
                                           const EnvelopeField& b, double t) {
    const std::size_t n = a.grid.n;
    WaveField f;
    f.grid = a.grid;
    f.u.assign(n, 0.0);
    f.v.assign(n, 0.0);

    const double k = model.carrier_k;
    const double w = model.carrier_omega;
    const double w3 = model.dispersion.omega(3.0 * k);
    const double vg1 = model.dispersion.omega_prime(k);
    const double vg3 = model.dispersion.omega_prime(3.0 * k);
    const auto da = detail::spectral_derivative(a);
    const auto db = detail::spectral_derivative(b);

    for (std::size_t i = 0; i < n; ++i) {
        const double x = a.grid.node(i);
        const double theta = k * x - w * t;
        const auto e1 = std::exp(std::complex<double>(0.0, theta));
        const auto e3 = std::exp(std::complex<double>(0.0, 3.0 * theta));
        const auto u = a.values[i] * e1 + b.values[i] * e3;
        f.u[i] = 2.0 * u.real();
        const auto vc = (std::complex<double>(0.0, -w) * a.values[i] - vg1 * da[i]) * e1 +
                        (std::complex<double>(0.0, -w3) * b.values[i] - vg3 * db[i]) * e3;
        f.v[i] = 2.0 * vc.real();
    }
    return f;
}

} // namespace msm
