#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "msm/envelope.hpp"
#include "msm/errors.hpp"
#include "msm/fft.hpp"

namespace msm {

struct EnvelopeTrajectory {
    std::vector<double> times;
    std::vector<EnvelopeField> fields;
    std::size_t steps = 0;

    const EnvelopeField& final_field() const { return fields.back(); }
};

// Spectral symbol of the linear envelope operator
// dA/dt = -v_g dA/dx + i beta2 dA/dx^2 - i alpha (v_g dA/dx)^2 + ...,
// evaluated per mode: lambda(kappa) = -i v_g kappa - i beta2 kappa^2
// + i alpha v_g^2 kappa^2.
inline std::vector<std::complex<double>> envelope_symbol(const Grid1D& grid, double v_g,
                                                         double beta2, double alpha = 0.0) {
    const auto kappa = dft_wavenumbers(grid.n, grid.length);
    std::vector<std::complex<double>> lambda(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j) {
        const double kj = kappa[j];
        lambda[j] = std::complex<double>(0.0, -v_g * kj - beta2 * kj * kj +
                                                  alpha * v_g * v_g * kj * kj);
    }
    return lambda;
}

// Strang splitting: half a linear step in spectral space, a full nonlinear
// step pointwise in physical space, half a linear step. The nonlinear
// callback advances the values in place by dt.
inline EnvelopeTrajectory
strang_solve(const EnvelopeField& a0, const std::vector<std::complex<double>>& symbol,
             const std::function<void(std::vector<std::complex<double>>&, double)>& nonlinear,
             double t_end, double dt, std::size_t record_every = 0) {
    validate_envelope(a0);
    if (!(t_end > 0.0))
        throw DomainError("strang_solve: horizon must be positive");
    if (!(dt > 0.0) || dt > 0.5)
        throw PreconditionError("strang_solve: dt must lie in (0, 0.5]");
    if (symbol.size() != a0.grid.n)
        throw DomainError("strang_solve: symbol size does not match the grid");

    const auto n_steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-12));
    const double h = t_end / static_cast<double>(n_steps);

    const std::size_t n = a0.grid.n;
    std::vector<std::complex<double>> half(n);
    for (std::size_t j = 0; j < n; ++j)
        half[j] = std::exp(0.5 * h * symbol[j]);

    Fft1D fft(n);
    auto values = a0.values;
    const auto linear_half = [&]() {
        auto spec = fft.forward(values);
        for (std::size_t j = 0; j < n; ++j)
            spec[j] *= half[j];
        values = fft.inverse(spec);
    };

    EnvelopeTrajectory run;
    const auto snapshot = [&](double t) {
        EnvelopeField f = a0;
        f.values = values;
        run.times.push_back(t);
        run.fields.push_back(std::move(f));
    };
    snapshot(0.0);

    for (std::size_t step = 0; step < n_steps; ++step) {
        linear_half();
        nonlinear(values, h);
        linear_half();
        if (!std::isfinite(values[0].real()) || !std::isfinite(values[0].imag()))
            throw DivergenceFailure("strang_solve: NaN detected");
        const double t = h * static_cast<double>(step + 1);
        if (record_every != 0 && (step + 1) % record_every == 0 && step + 1 != n_steps)
            snapshot(t);
    }
    run.steps = n_steps;
    for (const auto& z : values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw DivergenceFailure("strang_solve: NaN detected");
    snapshot(t_end);
    return run;
}

// Exact pointwise Kerr substep dA/dt = i gamma |A|^2 A: the modulus is
// conserved, so the step is a pure phase rotation.
inline std::function<void(std::vector<std::complex<double>>&, double)>
kerr_rotation(double gamma) {
    return [gamma](std::vector<std::complex<double>>& values, double dt) {
        for (auto& z : values)
            z *= std::exp(std::complex<double>(0.0, gamma * std::norm(z) * dt));
    };
}

} // namespace msm
