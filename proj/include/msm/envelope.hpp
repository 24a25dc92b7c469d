#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "msm/errors.hpp"
#include "msm/fft.hpp"

namespace msm {

inline bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Uniform periodic grid on [0, L).
struct Grid1D {
    std::size_t n = 0;
    double length = 0.0;

    double dx() const { return length / static_cast<double>(n); }
    double node(std::size_t i) const { return static_cast<double>(i) * dx(); }
};

// Complex envelope samples riding on the carrier e^{i(kx - omega t)}.
struct EnvelopeField {
    Grid1D grid;
    std::vector<std::complex<double>> values;
    double carrier_k = 0.0;
    double carrier_omega = 0.0;
};

// Real field and its time derivative on the same kind of grid.
struct WaveField {
    Grid1D grid;
    std::vector<double> u;
    std::vector<double> v;
};

// Fraction of spectral power carried by the upper half of the wavenumber
// range (|wrapped index| > n/4). A slowly varying envelope keeps this
// essentially at zero.
inline double envelope_band_fraction(const EnvelopeField& a) {
    Fft1D fft(a.values.size());
    auto spec = fft.forward(a.values);
    const std::size_t n = spec.size();
    double total = 0.0, upper = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double p = std::norm(spec[j]);
        total += p;
        const long sj = static_cast<long>(j);
        const long wrapped = 2 * sj <= static_cast<long>(n) ? sj : sj - static_cast<long>(n);
        if (std::abs(wrapped) > static_cast<long>(n) / 4)
            upper += p;
    }
    return total > 0.0 ? upper / total : 0.0;
}

inline void validate_envelope(const EnvelopeField& a) {
    if (!is_power_of_two(a.grid.n) || a.grid.n != a.values.size())
        throw PreconditionError("envelope grid must be a power of two matching the data size");
    if (!(a.grid.length > 0.0))
        throw PreconditionError("envelope grid length must be positive");
    if (envelope_band_fraction(a) >= 1e-8)
        throw PreconditionError("envelope is not band-limited: upper half of the spectrum "
                                "carries 1e-8 of the power or more");
}

inline double envelope_mass(const EnvelopeField& a) {
    double sum = 0.0;
    for (const auto& z : a.values)
        sum += std::norm(z);
    return sum * a.grid.dx();
}

// First moment of |A|^2 using node coordinates in [0, L); meaningful for
// packets that stay away from the periodic seam.
inline double envelope_centroid(const EnvelopeField& a) {
    double mass = 0.0, moment = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const double p = std::norm(a.values[i]);
        mass += p;
        moment += p * a.grid.node(i);
    }
    if (mass == 0.0)
        throw DomainError("envelope_centroid: zero field");
    return moment / mass;
}

// Change the node count of a band-limited field by padding or truncating
// its spectrum; the represented function is unchanged when upsampling.
inline EnvelopeField spectral_resample(const EnvelopeField& a, std::size_t new_n) {
    if (!is_power_of_two(new_n))
        throw DomainError("spectral_resample: target size must be a power of two");
    const std::size_t n = a.values.size();
    Fft1D fft(n);
    auto spec = fft.forward(a.values);

    std::vector<std::complex<double>> out_spec(new_n, 0.0);
    const long half = static_cast<long>(std::min(n, new_n)) / 2;
    for (long w = -half; w < half; ++w) {
        const std::size_t src = w >= 0 ? static_cast<std::size_t>(w)
                                       : n - static_cast<std::size_t>(-w);
        const std::size_t dst = w >= 0 ? static_cast<std::size_t>(w)
                                       : new_n - static_cast<std::size_t>(-w);
        out_spec[dst] = spec[src];
    }
    const double scale = static_cast<double>(new_n) / static_cast<double>(n);
    for (auto& z : out_spec)
        z *= scale;

    EnvelopeField out;
    out.grid = {new_n, a.grid.length};
    out.carrier_k = a.carrier_k;
    out.carrier_omega = a.carrier_omega;
    Fft1D fft_out(new_n);
    out.values = fft_out.inverse(out_spec);
    return out;
}

// Relative L2 and absolute Linf distance between two real fields on the
// same grid.
inline std::pair<double, double> envelope_error(const WaveField& ref, const WaveField& ms) {
    if (ref.grid.n != ms.grid.n || ref.u.size() != ms.u.size())
        throw DomainError("envelope_error: grids differ");
    double num = 0.0, den = 0.0, linf = 0.0;
    for (std::size_t i = 0; i < ref.u.size(); ++i) {
        const double d = ref.u[i] - ms.u[i];
        num += d * d;
        den += ref.u[i] * ref.u[i];
        linf = std::max(linf, std::abs(d));
    }
    const double l2 = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    return {l2, linf};
}

} // namespace msm
