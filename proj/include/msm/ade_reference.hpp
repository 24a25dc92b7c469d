#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "msm/envelope.hpp"
#include "msm/errors.hpp"
#include "msm/fft.hpp"
#include "msm/optics_coefficients.hpp"

namespace msm {

// Lorentz medium with an instantaneous Kerr polarization eta E^3. The
// linear polarization obeys the auxiliary oscillator
//   d^2 P / dt^2 + omega0^2 P = omega_p^2 E,
// which reproduces chi(omega) = omega_p^2 / (omega0^2 - omega^2).
struct LorentzMedium {
    double omega0 = 10.0;
    double omega_p = 2.0;
    double c = 1.0;
    double eta = 0.0;
};

// First-order state of the coupled wave/oscillator system:
// e, p and their time derivatives f, q.
struct ADEState {
    Grid1D grid;
    std::vector<double> e;
    std::vector<double> f;
    std::vector<double> p;
    std::vector<double> q;
};

struct ADERun {
    std::vector<double> times;
    std::vector<ADEState> states;
    std::size_t steps = 0;

    const ADEState& final_state() const { return states.back(); }
};

// Largest stable step used by the RK4 scheme: all linear branch
// frequencies are bounded by sqrt(c^2 k_max^2 + omega0^2 + omega_p^2).
inline double ade_step_bound(const LorentzMedium& m, const Grid1D& grid) {
    const double k_max = 3.14159265358979323846 * static_cast<double>(grid.n) / grid.length;
    return 0.2 / std::sqrt(m.c * m.c * k_max * k_max + m.omega0 * m.omega0 +
                           m.omega_p * m.omega_p);
}

// Physical-field initialization from a narrowband envelope at carrier
// (k, omega): E and dE/dt from the envelope and its transport, P and
// dP/dt from the first-order expansion of chi about the carrier so the
// oscillator starts on the optical branch rather than ringing at omega0.
inline ADEState ade_initial_state(const LorentzMedium& m, const TECoefficients& te,
                                  const EnvelopeField& a) {
    validate_envelope(a);
    const std::size_t n = a.grid.n;
    const double w = te.omega;
    const double w0sq = m.omega0 * m.omega0;
    const double wpsq = m.omega_p * m.omega_p;
    const double denom = w0sq - w * w;
    const double chi = wpsq / denom;
    const double chi_p = 2.0 * wpsq * w / (denom * denom);

    Fft1D fft(n);
    auto hat = fft.forward(a.values);
    const auto kappa = dft_wavenumbers(n, a.grid.length);
    for (std::size_t i = 0; i < n; ++i)
        hat[i] *= std::complex<double>(0.0, kappa[i]);
    const auto da = fft.inverse(hat);

    ADEState st;
    st.grid = a.grid;
    st.e.resize(n);
    st.f.resize(n);
    st.p.resize(n);
    st.q.resize(n);
    const std::complex<double> iunit(0.0, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = a.grid.node(i);
        const std::complex<double> phase(std::cos(te.k * x), std::sin(te.k * x));
        const auto amp = a.values[i];
        const auto p_env = chi * amp - iunit * chi_p * te.v_g * da[i];
        st.e[i] = 2.0 * (amp * phase).real();
        st.f[i] = 2.0 * ((-iunit * w * amp - te.v_g * da[i]) * phase).real();
        st.p[i] = 2.0 * (p_env * phase).real();
        st.q[i] = 2.0 * ((-iunit * w * p_env - te.v_g * chi * da[i]) * phase).real();
    }
    return st;
}

// RK4 pseudo-spectral integration of
//   d^2/dt^2 (E + P + eta E^3) = c^2 d^2 E / dx^2,
//   d^2 P / dt^2 + omega0^2 P = omega_p^2 E,
// written first order in (e, f, p, q). The x-derivative acts spectrally;
// the Kerr products use 2/3-filtered copies, and the update itself is
// filtered so the state stays inside the de-aliased band.
inline ADERun ade_reference_solve(const LorentzMedium& m, const ADEState& initial, double t_end,
                                  double dt, std::size_t record_every = 0) {
    const std::size_t n = initial.grid.n;
    if (!is_power_of_two(n) || initial.e.size() != n || initial.f.size() != n ||
        initial.p.size() != n || initial.q.size() != n)
        throw PreconditionError("ade_reference_solve: grid must be a power of two matching "
                                "the field arrays");
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw DomainError("ade_reference_solve: horizon and step must be positive");
    if (dt > ade_step_bound(m, initial.grid))
        throw PreconditionError("ade_reference_solve: step exceeds the stability bound");

    Fft1D fft(n);
    const auto kappa = dft_wavenumbers(n, initial.grid.length);
    const auto keep = dealias_mask(n);
    const double c_sq = m.c * m.c;
    const double w0sq = m.omega0 * m.omega0;
    const double wpsq = m.omega_p * m.omega_p;

    const auto filtered = [&](const std::vector<double>& x) {
        std::vector<std::complex<double>> z(x.begin(), x.end());
        auto hat = fft.forward(std::move(z));
        for (std::size_t i = 0; i < n; ++i)
            if (!keep[i])
                hat[i] = 0.0;
        auto back = fft.inverse(std::move(hat));
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = back[i].real();
        return out;
    };
    const auto dxx = [&](const std::vector<double>& x) {
        std::vector<std::complex<double>> z(x.begin(), x.end());
        auto hat = fft.forward(std::move(z));
        for (std::size_t i = 0; i < n; ++i)
            hat[i] *= -kappa[i] * kappa[i];
        auto back = fft.inverse(std::move(hat));
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = back[i].real();
        return out;
    };

    struct Deriv {
        std::vector<double> e, f, p, q;
    };
    const auto rhs = [&](const ADEState& s) {
        Deriv d;
        d.e = s.f;
        d.p = s.q;
        d.q.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            d.q[i] = wpsq * s.e[i] - w0sq * s.p[i];
        const auto lap = dxx(s.e);
        d.f.resize(n);
        if (m.eta != 0.0) {
            const auto ef = filtered(s.e);
            const auto ff = filtered(s.f);
            for (std::size_t i = 0; i < n; ++i) {
                const double nl = 6.0 * m.eta * ef[i] * ff[i] * ff[i];
                d.f[i] = (c_sq * lap[i] + w0sq * s.p[i] - wpsq * s.e[i] - nl) /
                         (1.0 + 3.0 * m.eta * ef[i] * ef[i]);
            }
            d.f = filtered(d.f);
        } else {
            for (std::size_t i = 0; i < n; ++i)
                d.f[i] = c_sq * lap[i] + w0sq * s.p[i] - wpsq * s.e[i];
        }
        return d;
    };

    const auto advanced = [&](const ADEState& s, const Deriv& d, double h) {
        ADEState out = s;
        for (std::size_t i = 0; i < n; ++i) {
            out.e[i] += h * d.e[i];
            out.f[i] += h * d.f[i];
            out.p[i] += h * d.p[i];
            out.q[i] += h * d.q[i];
        }
        return out;
    };

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    ADERun run;
    run.times.push_back(0.0);
    run.states.push_back(initial);

    ADEState s = initial;
    double t = 0.0;
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double h = std::min(dt, t_end - t);
        const auto k1 = rhs(s);
        const auto k2 = rhs(advanced(s, k1, 0.5 * h));
        const auto k3 = rhs(advanced(s, k2, 0.5 * h));
        const auto k4 = rhs(advanced(s, k3, h));
        for (std::size_t i = 0; i < n; ++i) {
            s.e[i] += h / 6.0 * (k1.e[i] + 2.0 * k2.e[i] + 2.0 * k3.e[i] + k4.e[i]);
            s.f[i] += h / 6.0 * (k1.f[i] + 2.0 * k2.f[i] + 2.0 * k3.f[i] + k4.f[i]);
            s.p[i] += h / 6.0 * (k1.p[i] + 2.0 * k2.p[i] + 2.0 * k3.p[i] + k4.p[i]);
            s.q[i] += h / 6.0 * (k1.q[i] + 2.0 * k2.q[i] + 2.0 * k3.q[i] + k4.q[i]);
        }
        t += h;
        ++run.steps;
        if (!std::isfinite(s.e[0]) || !std::isfinite(s.f[0]))
            throw DivergenceFailure("ade_reference_solve: field lost finiteness");
        if (record_every != 0 && (step + 1) % record_every == 0 && t < t_end) {
            run.times.push_back(t);
            run.states.push_back(s);
        }
    }
    for (double x : s.e)
        if (!std::isfinite(x))
            throw DivergenceFailure("ade_reference_solve: field lost finiteness");
    run.times.push_back(t_end);
    run.states.push_back(std::move(s));
    return run;
}

// Envelope recovery by analytic-signal demodulation: the field convention
// is E = A e^{i theta} + c.c., so the positive half of the spectrum of E
// carries A directly. Zero the negative half, invert, and strip the
// carrier phase at time t.
inline EnvelopeField demodulate_envelope(const ADEState& st, double k, double omega, double t) {
    const std::size_t n = st.grid.n;
    if (!is_power_of_two(n) || st.e.size() != n)
        throw PreconditionError("demodulate_envelope: grid must be a power of two matching "
                                "the field array");
    Fft1D fft(n);
    std::vector<std::complex<double>> z(st.e.begin(), st.e.end());
    auto hat = fft.forward(std::move(z));
    for (std::size_t j = 0; j < n; ++j) {
        const auto sj = static_cast<long>(j);
        const long wrapped = 2 * sj <= static_cast<long>(n) ? sj : sj - static_cast<long>(n);
        if (wrapped < 0)
            hat[j] = 0.0;
    }
    auto analytic = fft.inverse(std::move(hat));

    EnvelopeField out;
    out.grid = st.grid;
    out.carrier_k = k;
    out.carrier_omega = omega;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double theta = k * st.grid.node(i) - omega * t;
        out.values[i] = analytic[i] * std::complex<double>(std::cos(theta), -std::sin(theta));
    }
    return out;
}

} // namespace msm
