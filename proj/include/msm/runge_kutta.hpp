#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "msm/errors.hpp"

namespace msm {

// Dense ODE trajectory sampled at accepted steps, with cubic Hermite
// interpolation in between. Stores the derivative at each node so the
// interpolant needs no extra right-hand-side calls.
class Trajectory {
public:
    void reserve(std::size_t n) {
        t_.reserve(n);
        y_.reserve(n);
        dy_.reserve(n);
    }

    void push(double t, std::vector<double> y, std::vector<double> dy) {
        t_.push_back(t);
        y_.push_back(std::move(y));
        dy_.push_back(std::move(dy));
    }

    std::size_t steps() const { return t_.empty() ? 0 : t_.size() - 1; }
    double t_front() const { return t_.front(); }
    double t_back() const { return t_.back(); }
    const std::vector<double>& back() const { return y_.back(); }
    const std::vector<double>& node_times() const { return t_; }

    // Cubic Hermite on the bracketing step.
    std::vector<double> at(double t) const {
        if (t_.empty())
            throw DomainError("Trajectory::at: empty trajectory");
        if (t <= t_.front())
            return y_.front();
        if (t >= t_.back())
            return y_.back();
        const auto it = std::upper_bound(t_.begin(), t_.end(), t);
        const std::size_t hi = static_cast<std::size_t>(it - t_.begin());
        const std::size_t lo = hi - 1;
        const double h = t_[hi] - t_[lo];
        const double s = (t - t_[lo]) / h;
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        std::vector<double> out(y_[lo].size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = h00 * y_[lo][i] + h * h10 * dy_[lo][i] + h01 * y_[hi][i] +
                     h * h11 * dy_[hi][i];
        return out;
    }

private:
    std::vector<double> t_;
    std::vector<std::vector<double>> y_;
    std::vector<std::vector<double>> dy_;
};

struct AdaptiveOptions {
    double tol = 1e-12;        // both absolute and relative local error
    double initial_step = 1e-4;
    double min_step = 1e-14;   // relative to the horizon
    double max_step = 0.0;     // 0 = horizon
    double divergence_norm = 0.0; // 0 = no guard; else DivergenceFailure past it
};

// Dormand-Prince 5(4) embedded pair, error-per-step control. Rhs is any
// callable rhs(t, y, dydt). Integrates from t0 to t1 (t1 > t0) and
// records every accepted step in the trajectory.
template <class Rhs>
Trajectory dormand_prince_solve(Rhs&& rhs, std::vector<double> y0, double t0, double t1,
                                const AdaptiveOptions& opt = {}) {
    static const double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static const double a[7][6] = {
        {},
        {1.0 / 5},
        {3.0 / 40, 9.0 / 40},
        {44.0 / 45, -56.0 / 15, 32.0 / 9},
        {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
        {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
        {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
    };
    // 5th-order weights equal a[6]; embedded 4th-order weights below.
    static const double b4[7] = {5179.0 / 57600, 0.0,           7571.0 / 16695, 393.0 / 640,
                                 -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

    if (!(t1 > t0))
        throw DomainError("dormand_prince_solve: t1 must exceed t0");
    if (!(opt.tol > 0))
        throw DomainError("dormand_prince_solve: tolerance must be positive");

    const std::size_t d = y0.size();
    const double horizon = t1 - t0;
    const double hmax = opt.max_step > 0 ? opt.max_step : horizon;
    const double hmin = opt.min_step * horizon;

    std::vector<double> k[7];
    for (auto& ki : k)
        ki.assign(d, 0.0);
    std::vector<double> y = std::move(y0), ytmp(d), y5(d), y4(d);

    Trajectory traj;
    double t = t0;
    rhs(t, y, k[0]); // FSAL seed
    traj.push(t, y, k[0]);

    double h = std::min(opt.initial_step, hmax);
    while (t < t1) {
        h = std::min(h, t1 - t);
        for (int s = 1; s < 7; ++s) {
            for (std::size_t i = 0; i < d; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s; ++j)
                    acc += a[s][j] * k[j][i];
                ytmp[i] = y[i] + h * acc;
            }
            rhs(t + c[s] * h, ytmp, k[s]);
        }
        // Stage 7 was evaluated at the 5th-order candidate (FSAL), so ytmp
        // already holds y5; the embedded 4th-order value uses b4.
        y5 = ytmp;
        double err = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            double acc = 0.0;
            for (int s = 0; s < 7; ++s)
                acc += b4[s] * k[s][i];
            y4[i] = y[i] + h * acc;
            const double sc = opt.tol * (1.0 + std::max(std::abs(y[i]), std::abs(y5[i])));
            const double e = (y5[i] - y4[i]) / sc;
            err += e * e;
        }
        err = std::sqrt(err / d);

        if (err <= 1.0) {
            t += h;
            y = y5;
            // k[6] is rhs at the new point (FSAL property of the pair).
            k[0] = k[6];
            traj.push(t, y, k[0]);
            double norm = 0.0;
            for (double v : y)
                norm = std::max(norm, std::abs(v));
            if (opt.divergence_norm > 0 && norm > opt.divergence_norm)
                throw DivergenceFailure("dormand_prince_solve: |y| exceeded guard");
        }
        const double shrink = err > 0 ? std::pow(err, -0.2) : 5.0;
        h *= std::clamp(0.9 * shrink, 0.2, 5.0);
        h = std::min(h, hmax);
        if (h < hmin)
            throw StiffnessFailure("dormand_prince_solve: step size underflow");
    }
    return traj;
}

// Classical fixed-step RK4 over n_steps; records every node.
template <class Rhs>
Trajectory rk4_solve(Rhs&& rhs, std::vector<double> y0, double t0, double t1,
                     std::size_t n_steps) {
    if (n_steps == 0)
        throw DomainError("rk4_solve: need at least one step");
    const std::size_t d = y0.size();
    const double h = (t1 - t0) / static_cast<double>(n_steps);
    std::vector<double> k1(d), k2(d), k3(d), k4(d), tmp(d);
    std::vector<double> y = std::move(y0);

    Trajectory traj;
    traj.reserve(n_steps + 1);
    rhs(t0, y, k1);
    traj.push(t0, y, k1);
    for (std::size_t n = 0; n < n_steps; ++n) {
        // k1 already holds rhs(t, y) from the seed or the previous tail call.
        const double t = t0 + h * static_cast<double>(n);
        for (std::size_t i = 0; i < d; ++i)
            tmp[i] = y[i] + 0.5 * h * k1[i];
        rhs(t + 0.5 * h, tmp, k2);
        for (std::size_t i = 0; i < d; ++i)
            tmp[i] = y[i] + 0.5 * h * k2[i];
        rhs(t + 0.5 * h, tmp, k3);
        for (std::size_t i = 0; i < d; ++i)
            tmp[i] = y[i] + h * k3[i];
        rhs(t + h, tmp, k4);
        for (std::size_t i = 0; i < d; ++i)
            y[i] += h / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        rhs(t + h, y, k1);
        traj.push(t + h, y, k1);
    }
    return traj;
}

} // namespace msm
