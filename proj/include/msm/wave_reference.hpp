#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "msm/dispersion.hpp"
#include "msm/envelope.hpp"
#include "msm/errors.hpp"
#include "msm/fft.hpp"

namespace msm {

// One of the two built-in scalar wave equations, u_tt = -Omega^2(-i d/dx) u
// + eps u^p, with Omega the linear dispersion symbol.
struct WaveEquation {
    std::string name;
    DispersionRelation dispersion;
    int nonlinear_power = 2;
};

// u_tt - u_xx + u = eps u^2
inline WaveEquation klein_gordon_equation() {
    return {"klein-gordon", klein_gordon_dispersion(), 2};
}

// u_tt + u_xx + u_xxxx + u = eps u^3
inline WaveEquation fourth_order_equation() {
    return {"fourth-order", fourth_order_dispersion(), 3};
}

struct WaveRun {
    std::vector<double> times;
    std::vector<WaveField> fields;
    std::size_t steps = 0;

    const WaveField& final_field() const { return fields.back(); }
};

// Quadratic energy of the linearized equation, evaluated spectrally:
// sum over modes of |v_hat|^2 + omega^2(kappa) |u_hat|^2, scaled to the
// integral normalization L/n^2.
inline double spectral_energy(const WaveEquation& eq, const WaveField& f) {
    const std::size_t n = f.grid.n;
    Fft1D fft(n);
    std::vector<std::complex<double>> uc(n), vc(n);
    for (std::size_t i = 0; i < n; ++i) {
        uc[i] = f.u[i];
        vc[i] = f.v[i];
    }
    const auto uh = fft.forward(uc);
    const auto vh = fft.forward(vc);
    const auto kappa = dft_wavenumbers(n, f.grid.length);

    double e = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = eq.dispersion.omega(kappa[j]);
        e += std::norm(vh[j]) + w * w * std::norm(uh[j]);
    }
    return e * f.grid.length / (static_cast<double>(n) * static_cast<double>(n));
}

// Pseudo-spectral RK4 integration of the full wave equation. Spatial
// derivatives act in spectral space; the pointwise nonlinearity is computed
// from a 2/3-rule filtered copy of u and filtered again afterwards.
inline WaveRun spectral_reference_solve(const WaveEquation& eq, const WaveField& initial,
                                        double eps, double t_end, double dt,
                                        std::size_t record_every = 0) {
    const std::size_t n = initial.grid.n;
    if (!is_power_of_two(n) || initial.u.size() != n || initial.v.size() != n)
        throw PreconditionError("spectral_reference_solve: grid must be a power of two "
                                "matching the field arrays");
    if (!(t_end > 0.0) || !(dt > 0.0))
        throw DomainError("spectral_reference_solve: horizon and step must be positive");

    const double k_max = M_PI * static_cast<double>(n) / initial.grid.length;
    const double w_max = eq.dispersion.omega(k_max);
    if (dt > 0.2 / w_max)
        throw PreconditionError("spectral_reference_solve: dt exceeds 0.2 / omega(k_max)");

    Fft1D fft(n);
    const auto kappa = dft_wavenumbers(n, initial.grid.length);
    const auto mask = dealias_mask(n);
    std::vector<double> omega2(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double w = eq.dispersion.omega(kappa[j]);
        omega2[j] = w * w;
    }

    using CV = std::vector<std::complex<double>>;
    // dv = -Omega^2 u + eps * filtered((filtered u)^p)
    const auto accel = [&](const CV& u, CV& dv) {
        CV uh = fft.forward(u);
        CV nl_h(n);
        if (eps != 0.0) {
            CV uf = uh;
            for (std::size_t j = 0; j < n; ++j)
                if (!mask[j])
                    uf[j] = 0.0;
            CV up = fft.inverse(uf);
            for (std::size_t j = 0; j < n; ++j) {
                const double x = up[j].real();
                up[j] = eq.nonlinear_power == 2 ? x * x : x * x * x;
            }
            nl_h = fft.forward(up);
            for (std::size_t j = 0; j < n; ++j)
                if (!mask[j])
                    nl_h[j] = 0.0;
        }
        for (std::size_t j = 0; j < n; ++j)
            uh[j] = -omega2[j] * uh[j] + (eps != 0.0 ? eps * nl_h[j] : 0.0);
        dv = fft.inverse(uh);
    };

    CV u(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = initial.u[i];
        v[i] = initial.v[i];
    }

    WaveRun run;
    const auto snapshot = [&](double t) {
        WaveField f;
        f.grid = initial.grid;
        f.u.resize(n);
        f.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            f.u[i] = u[i].real();
            f.v[i] = v[i].real();
        }
        run.times.push_back(t);
        run.fields.push_back(std::move(f));
    };
    snapshot(0.0);

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    const double h = t_end / static_cast<double>(n_steps);

    CV a1(n), a2(n), a3(n), a4(n), ut(n), vt(n);
    for (std::size_t step = 0; step < n_steps; ++step) {
        // classical RK4 on (u' = v, v' = accel(u))
        accel(u, a1);
        for (std::size_t i = 0; i < n; ++i) {
            ut[i] = u[i] + 0.5 * h * v[i];
            vt[i] = v[i] + 0.5 * h * a1[i];
        }
        accel(ut, a2);
        CV v2 = vt;
        for (std::size_t i = 0; i < n; ++i) {
            ut[i] = u[i] + 0.5 * h * v2[i];
            vt[i] = v[i] + 0.5 * h * a2[i];
        }
        accel(ut, a3);
        CV v3 = vt;
        for (std::size_t i = 0; i < n; ++i) {
            ut[i] = u[i] + h * v3[i];
            vt[i] = v[i] + h * a3[i];
        }
        accel(ut, a4);
        for (std::size_t i = 0; i < n; ++i) {
            u[i] += h / 6.0 * (v[i] + 2.0 * v2[i] + 2.0 * v3[i] + vt[i]);
            v[i] += h / 6.0 * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        }
        if (!std::isfinite(u[0].real()) || !std::isfinite(v[0].real()))
            throw DivergenceFailure("spectral_reference_solve: NaN detected");
        const double t = h * static_cast<double>(step + 1);
        if (record_every != 0 && (step + 1) % record_every == 0 && step + 1 != n_steps)
            snapshot(t);
    }
    run.steps = n_steps;
    for (const auto& z : u)
        if (!std::isfinite(z.real()))
            throw DivergenceFailure("spectral_reference_solve: NaN detected");
    snapshot(t_end);
    return run;
}

} // namespace msm
