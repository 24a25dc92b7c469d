#pragma once

#include <fftw3.h>

#include <complex>
#include <cstdlib>
#include <mutex>
#include <vector>

#include "msm/errors.hpp"

namespace msm {

namespace detail {
// FFTW plan creation is not thread-safe; execution on distinct buffers is.
inline std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}
} // namespace detail

// Forward/inverse complex DFT of fixed size with owned buffers. Plans use
// FFTW_ESTIMATE so results do not depend on runtime measurement. Not
// shareable across threads; create one per thread instead.
class Fft1D {
public:
    explicit Fft1D(std::size_t n) : n_(n) {
        if (n == 0)
            throw DomainError("Fft1D: empty transform");
        buf_ = fftw_alloc_complex(n);
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fwd_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~Fft1D() {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(buf_);
    }

    Fft1D(const Fft1D&) = delete;
    Fft1D& operator=(const Fft1D&) = delete;

    std::size_t size() const { return n_; }

    std::vector<std::complex<double>> forward(std::vector<std::complex<double>> a) {
        run(a, fwd_, false);
        return a;
    }
    std::vector<std::complex<double>> inverse(std::vector<std::complex<double>> a) {
        run(a, inv_, true);
        return a;
    }

private:
    void run(std::vector<std::complex<double>>& a, fftw_plan plan, bool normalize) {
        if (a.size() != n_)
            throw DomainError("Fft1D: size mismatch");
        auto* b = reinterpret_cast<std::complex<double>*>(buf_);
        std::copy(a.begin(), a.end(), b);
        fftw_execute(plan);
        std::copy(b, b + n_, a.begin());
        if (normalize)
            for (auto& v : a)
                v /= static_cast<double>(n_);
    }

    std::size_t n_;
    fftw_complex* buf_;
    fftw_plan fwd_, inv_;
};

// Row-major ny x nx complex DFT, same conventions as Fft1D.
class Fft2D {
public:
    Fft2D(std::size_t ny, std::size_t nx) : ny_(ny), nx_(nx) {
        if (nx == 0 || ny == 0)
            throw DomainError("Fft2D: empty transform");
        buf_ = fftw_alloc_complex(nx * ny);
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fwd_ = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf_, buf_,
                                FFTW_FORWARD, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), buf_, buf_,
                                FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~Fft2D() {
        std::lock_guard<std::mutex> lock(detail::fftw_plan_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(buf_);
    }

    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    std::size_t rows() const { return ny_; }
    std::size_t cols() const { return nx_; }

    std::vector<std::complex<double>> forward(std::vector<std::complex<double>> a) {
        run(a, fwd_, false);
        return a;
    }
    std::vector<std::complex<double>> inverse(std::vector<std::complex<double>> a) {
        run(a, inv_, true);
        return a;
    }

private:
    void run(std::vector<std::complex<double>>& a, fftw_plan plan, bool normalize) {
        if (a.size() != nx_ * ny_)
            throw DomainError("Fft2D: size mismatch");
        auto* b = reinterpret_cast<std::complex<double>*>(buf_);
        std::copy(a.begin(), a.end(), b);
        fftw_execute(plan);
        std::copy(b, b + nx_ * ny_, a.begin());
        if (normalize)
            for (auto& v : a)
                v /= static_cast<double>(nx_ * ny_);
    }

    std::size_t ny_, nx_;
    fftw_complex* buf_;
    fftw_plan fwd_, inv_;
};

// DFT wavenumbers for a periodic box of length L: 2*pi*j/L with j wrapped
// to (-n/2, n/2].
inline std::vector<double> dft_wavenumbers(std::size_t n, double L) {
    if (!(L > 0))
        throw DomainError("dft_wavenumbers: box length must be positive");
    std::vector<double> k(n);
    const double base = 2.0 * 3.14159265358979323846 / L;
    for (std::size_t j = 0; j < n; ++j) {
        const auto sj = static_cast<long>(j);
        const long wrapped = 2 * sj <= static_cast<long>(n) ? sj : sj - static_cast<long>(n);
        k[j] = base * static_cast<double>(wrapped);
    }
    return k;
}

// Keep-mask for the 2/3 rule: true where |j| <= n/3.
inline std::vector<bool> dealias_mask(std::size_t n) {
    std::vector<bool> keep(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto sj = static_cast<long>(j);
        const long wrapped = 2 * sj <= static_cast<long>(n) ? sj : sj - static_cast<long>(n);
        keep[j] = 3 * std::abs(wrapped) <= static_cast<long>(n);
    }
    return keep;
}

} // namespace msm
