#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "msm/errors.hpp"

namespace msm {

enum class OrderClass { BigO, LittleO, Inconclusive };

struct OrderVerdict {
    OrderClass classification = OrderClass::Inconclusive;
    std::vector<std::pair<double, double>> ratio_trace; // (eps, |f/g|)
};

// Default sampling grid: geometric, ratio 1/2, 12 points from 1e-1 down.
inline std::vector<double> default_order_grid() {
    std::vector<double> grid;
    double eps = 1e-1;
    for (int i = 0; i < 12; ++i, eps *= 0.5)
        grid.push_back(eps);
    return grid;
}

// Classifies |f/g| on a decreasing eps grid. Little-o needs the last four
// steps of the trace to each shrink by at least 1.5x; big-O needs the last
// four samples to sit within 25% of their median and away from zero. The
// shrink-factor rule keeps slowly varying logarithms on the little-o side.
template <class F, class G>
OrderVerdict estimate_order(F&& f, G&& g, const std::vector<double>& eps_grid) {
    if (eps_grid.size() < 6)
        throw DomainError("estimate_order: need at least 6 grid points");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0))
            throw DomainError("estimate_order: grid values must be positive");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1]))
            throw DomainError("estimate_order: grid must be strictly decreasing");
    }

    OrderVerdict verdict;
    verdict.ratio_trace.reserve(eps_grid.size());
    for (double eps : eps_grid) {
        const double denom = static_cast<double>(g(eps));
        if (denom == 0.0)
            throw DomainError("estimate_order: g vanished at a grid point");
        verdict.ratio_trace.emplace_back(eps, std::abs(static_cast<double>(f(eps)) / denom));
    }

    const std::size_t n = verdict.ratio_trace.size();
    bool shrinking = true;
    for (std::size_t i = n - 4; i < n; ++i) {
        const double prev = verdict.ratio_trace[i - 1].second;
        const double cur = verdict.ratio_trace[i].second;
        if (!(cur * 1.5 <= prev)) {
            shrinking = false;
            break;
        }
    }
    if (shrinking) {
        verdict.classification = OrderClass::LittleO;
        return verdict;
    }

    std::vector<double> tail;
    for (std::size_t i = n - 4; i < n; ++i)
        tail.push_back(verdict.ratio_trace[i].second);
    std::sort(tail.begin(), tail.end());
    const double median = 0.5 * (tail[1] + tail[2]);
    bool flat = median > 1e-300;
    for (double r : tail)
        if (std::abs(r - median) > 0.25 * median)
            flat = false;
    verdict.classification = flat ? OrderClass::BigO : OrderClass::Inconclusive;
    return verdict;
}

} // namespace msm
