#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "msm/errors.hpp"

namespace msm {

// Gauge sequence delta_n(eps) = eps^n for integer n starting at n0. The
// start index may be negative (singular expansions carry an eps^-1 term).
enum class GaugeKind { IntegerPowers };

struct GaugeSequence {
    GaugeKind kind = GaugeKind::IntegerPowers;
    int start = 0;

    // eps^n by repeated multiplication; deterministic across platforms,
    // unlike pow(), and exact for the small n this library uses.
    static double power(double eps, int n) {
        if (n < 0)
            return 1.0 / power(eps, -n);
        double acc = 1.0, sq = eps;
        for (int m = n; m > 0; m >>= 1) {
            if (m & 1)
                acc *= sq;
            sq *= sq;
        }
        return acc;
    }

    double delta(int n, double eps) const { return power(eps, n); }
};

// Formal series sum a_n eps^n, n = n0 .. n0+size-1, with complex
// coefficients. Immutable after construction.
class AsymptoticSeries {
public:
    AsymptoticSeries(GaugeSequence gauge, std::vector<std::complex<double>> coeffs)
        : gauge_(gauge), coeffs_(std::move(coeffs)) {
        if (coeffs_.empty())
            throw DomainError("AsymptoticSeries: empty coefficient list");
    }

    static AsymptoticSeries from_real(int start, std::vector<double> coeffs) {
        std::vector<std::complex<double>> c(coeffs.begin(), coeffs.end());
        return AsymptoticSeries(GaugeSequence{GaugeKind::IntegerPowers, start}, std::move(c));
    }

    const GaugeSequence& gauge() const { return gauge_; }
    int start() const { return gauge_.start; }
    int last_index() const { return gauge_.start + static_cast<int>(coeffs_.size()) - 1; }
    std::size_t size() const { return coeffs_.size(); }

    const std::complex<double>& coeff(int n) const {
        if (n < start() || n > last_index())
            throw IndexError("AsymptoticSeries::coeff: index " + std::to_string(n) +
                             " outside [" + std::to_string(start()) + ", " +
                             std::to_string(last_index()) + "]");
        return coeffs_[static_cast<std::size_t>(n - start())];
    }

private:
    GaugeSequence gauge_;
    std::vector<std::complex<double>> coeffs_;
};

// Partial sum through order m, accumulated in ascending n.
inline std::complex<double> evaluate_partial_sum(const AsymptoticSeries& series, double eps,
                                                 int m) {
    if (!(eps > 0))
        throw DomainError("evaluate_partial_sum: eps must be positive");
    if (m < series.start() || m > series.last_index())
        throw IndexError("evaluate_partial_sum: truncation index out of range");
    std::complex<double> sum = 0.0;
    for (int n = series.start(); n <= m; ++n)
        sum += series.coeff(n) * series.gauge().delta(n, eps);
    return sum;
}

// Largest m with |a_n eps^n| strictly decreasing over [n0, m]. An equal
// pair of magnitudes stops the scan, so ties resolve to the smaller index.
inline int optimal_truncation(const AsymptoticSeries& series, double eps) {
    if (!(eps > 0))
        throw DomainError("optimal_truncation: eps must be positive");
    int m = series.start();
    double prev = std::abs(series.coeff(m)) * std::abs(series.gauge().delta(m, eps));
    for (int n = series.start() + 1; n <= series.last_index(); ++n) {
        const double mag = std::abs(series.coeff(n)) * std::abs(series.gauge().delta(n, eps));
        if (mag < prev) {
            m = n;
            prev = mag;
        } else {
            break;
        }
    }
    return m;
}

} // namespace msm
