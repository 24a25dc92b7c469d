#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "msm/errors.hpp"
#include "msm/runge_kutta.hpp"

namespace msm {

using Cplx = std::complex<double>;

// Amplitude states are flat double vectors: a complex scalar A is stored
// as (Re A, Im A); the real pair model stores (A, B).
enum class AmplitudeKind { ComplexScalar, RealPair };

inline Cplx state_as_complex(const std::vector<double>& s) { return {s[0], s[1]}; }

// One reconstruction term: coeff(state) * eps^p * e^{i lambda t}, added
// together with its complex conjugate unless the term is already real.
struct ReconstructionTerm {
    Cplx lambda;
    int eps_power = 0;
    bool add_conjugate = true;
    std::function<Cplx(const std::vector<double>&)> coeff;
};

struct ReconstructionMap {
    std::vector<ReconstructionTerm> terms;

    Cplx evaluate_complex(const std::vector<double>& state, double t, double eps) const {
        Cplx sum = 0.0;
        for (const auto& term : terms) {
            Cplx v = term.coeff(state) * std::exp(Cplx(0.0, 1.0) * term.lambda * t);
            for (int p = 0; p < term.eps_power; ++p)
                v *= eps;
            sum += term.add_conjugate ? v + std::conj(v) : v;
        }
        return sum;
    }

    double evaluate(const std::vector<double>& state, double t, double eps) const {
        return evaluate_complex(state, t, eps).real();
    }
};

// A worked multiple-scales ODE example: slow evolution of the amplitude
// state (eps and eps^2 contributions combined in rhs, and separated into
// the two scale flows for the compatibility test), the reconstruction
// back to y(t), and the pieces Newton needs to fit initial conditions.
struct AmplitudeModel {
    std::string name;
    AmplitudeKind kind = AmplitudeKind::ComplexScalar;
    std::size_t dimension = 2; // doubles in the state vector

    std::function<void(const std::vector<double>&, double, std::vector<double>&)> rhs;
    std::function<void(const std::vector<double>&, std::vector<double>&)> flow1; // t1 scale
    std::function<void(const std::vector<double>&, std::vector<double>&)> flow2; // t2 scale
    ReconstructionMap reconstruction;
    // residual(state, eps, y0, dy0) for the Newton fit, truncated at order eps.
    std::function<void(const std::vector<double>&, double, double, double, std::vector<double>&)>
        ic_residual;
    std::function<std::vector<double>(double, double)> ic_seed; // eps = 0 solution
    // Optional closed-form flow of the full rhs; empty if none exists.
    std::function<std::vector<double>(const std::vector<double>&, double, double)> closed_flow;
};

// ---- the three worked models ------------------------------------------

// y'' + eps y' + y = 0. Amplitude equation dA/dt = -(eps/2)A - i(eps^2/8)A,
// reconstruction y = A e^{it} + c.c.
inline AmplitudeModel damped_linear_model(int order = 2) {
    if (order < 1 || order > 2)
        throw DomainError("damped_linear_model: order must be 1 or 2");
    AmplitudeModel m;
    m.name = order == 2 ? "damped-linear" : "damped-linear-order1";
    m.kind = AmplitudeKind::ComplexScalar;

    m.rhs = [order](const std::vector<double>& s, double eps, std::vector<double>& out) {
        Cplx A = state_as_complex(s);
        Cplx f = -0.5 * eps * A;
        if (order >= 2)
            f += -Cplx(0.0, 1.0) * (eps * eps / 8.0) * A;
        out = {f.real(), f.imag()};
    };
    m.flow1 = [](const std::vector<double>& s, std::vector<double>& out) {
        Cplx f = -0.5 * state_as_complex(s);
        out = {f.real(), f.imag()};
    };
    m.flow2 = [](const std::vector<double>& s, std::vector<double>& out) {
        Cplx f = -Cplx(0.0, 1.0 / 8.0) * state_as_complex(s);
        out = {f.real(), f.imag()};
    };
    m.reconstruction.terms = {
        {Cplx(1.0, 0.0), 0, true, [](const std::vector<double>& s) { return state_as_complex(s); }},
    };
    m.ic_residual = [](const std::vector<double>& s, double eps, double y0, double dy0,
                       std::vector<double>& r) {
        // y(0) = 2 Re A; y'(0) = 2 Re[(i - eps/2) A] to first order.
        Cplx A = state_as_complex(s);
        r = {2.0 * A.real() - y0, -2.0 * A.imag() - eps * A.real() - dy0};
    };
    m.ic_seed = [](double y0, double dy0) { return std::vector<double>{y0 / 2.0, -dy0 / 2.0}; };
    m.closed_flow = [order](const std::vector<double>& s, double t, double eps) {
        Cplx A = state_as_complex(s);
        Cplx phase = order >= 2 ? std::exp(Cplx(0.0, -eps * eps * t / 8.0)) : Cplx(1.0, 0.0);
        Cplx At = A * std::exp(-0.5 * eps * t) * phase;
        return std::vector<double>{At.real(), At.imag()};
    };
    return m;
}

// y'' + y = eps y^3. Amplitude equation
// dA/dt = -i(3/2)eps|A|^2 A - i(15/16)eps^2|A|^4 A, reconstruction
// y = A e^{it} - (eps/8) A^3 e^{3it} + c.c.
inline AmplitudeModel duffing_model(int order = 2) {
    if (order < 1 || order > 2)
        throw DomainError("duffing_model: order must be 1 or 2");
    AmplitudeModel m;
    m.name = order == 2 ? "duffing" : "duffing-order1";
    m.kind = AmplitudeKind::ComplexScalar;

    m.rhs = [order](const std::vector<double>& s, double eps, std::vector<double>& out) {
        Cplx A = state_as_complex(s);
        const double n = std::norm(A);
        Cplx f = -Cplx(0.0, 1.5) * eps * n * A;
        if (order >= 2)
            f += -Cplx(0.0, 15.0 / 16.0) * eps * eps * n * n * A;
        out = {f.real(), f.imag()};
    };
    m.flow1 = [](const std::vector<double>& s, std::vector<double>& out) {
        Cplx A = state_as_complex(s);
        Cplx f = -Cplx(0.0, 1.5) * std::norm(A) * A;
        out = {f.real(), f.imag()};
    };
    m.flow2 = [](const std::vector<double>& s, std::vector<double>& out) {
        Cplx A = state_as_complex(s);
        Cplx f = -Cplx(0.0, 15.0 / 16.0) * std::norm(A) * std::norm(A) * A;
        out = {f.real(), f.imag()};
    };
    m.reconstruction.terms = {
        {Cplx(1.0, 0.0), 0, true, [](const std::vector<double>& s) { return state_as_complex(s); }},
        {Cplx(3.0, 0.0), 1, true,
         [](const std::vector<double>& s) {
             Cplx A = state_as_complex(s);
             return -A * A * A / 8.0;
         }},
    };
    m.ic_residual = [](const std::vector<double>& s, double eps, double y0, double dy0,
                       std::vector<double>& r) {
        Cplx A = state_as_complex(s);
        Cplx r1 = A - (eps / 8.0) * A * A * A;
        Cplx r2 = Cplx(0.0, 1.0) * A -
                  eps * (Cplx(0.0, 1.5) * std::norm(A) * A + Cplx(0.0, 3.0 / 8.0) * A * A * A);
        r = {2.0 * r1.real() - y0, 2.0 * r2.real() - dy0};
    };
    m.ic_seed = [](double y0, double dy0) { return std::vector<double>{y0 / 2.0, -dy0 / 2.0}; };
    m.closed_flow = [order](const std::vector<double>& s, double t, double eps) {
        // |A| is conserved, so the flow is a fixed-rate phase rotation.
        Cplx A = state_as_complex(s);
        const double n = std::norm(A);
        double rate = -1.5 * eps * n;
        if (order >= 2)
            rate += -15.0 / 16.0 * eps * eps * n * n;
        Cplx At = A * std::exp(Cplx(0.0, rate * t));
        return std::vector<double>{At.real(), At.imag()};
    };
    return m;
}

// y'' + y' = eps y^2 with two real amplitudes:
// dA/dt = -eps A^2 - 2 eps^2 A^3, dB/dt = 2 eps A B + 2 eps^2 A^2 B,
// reconstruction y = A + B e^{-t} - eps (1/2) B^2 e^{-2t}.
inline AmplitudeModel damped_quadratic_model(int order = 2) {
    if (order < 1 || order > 2)
        throw DomainError("damped_quadratic_model: order must be 1 or 2");
    AmplitudeModel m;
    m.name = order == 2 ? "damped-quadratic" : "damped-quadratic-order1";
    m.kind = AmplitudeKind::RealPair;

    m.rhs = [order](const std::vector<double>& s, double eps, std::vector<double>& out) {
        const double A = s[0], B = s[1];
        double fa = -eps * A * A;
        double fb = 2.0 * eps * A * B;
        if (order >= 2) {
            fa += -2.0 * eps * eps * A * A * A;
            fb += 2.0 * eps * eps * A * A * B;
        }
        out = {fa, fb};
    };
    m.flow1 = [](const std::vector<double>& s, std::vector<double>& out) {
        out = {-s[0] * s[0], 2.0 * s[0] * s[1]};
    };
    m.flow2 = [](const std::vector<double>& s, std::vector<double>& out) {
        out = {-2.0 * s[0] * s[0] * s[0], 2.0 * s[0] * s[0] * s[1]};
    };
    m.reconstruction.terms = {
        {Cplx(0.0, 0.0), 0, false,
         [](const std::vector<double>& s) { return Cplx(s[0], 0.0); }},
        {Cplx(0.0, 1.0), 0, false, // e^{i(i)t} = e^{-t}
         [](const std::vector<double>& s) { return Cplx(s[1], 0.0); }},
        {Cplx(0.0, 2.0), 1, false,
         [](const std::vector<double>& s) { return Cplx(-0.5 * s[1] * s[1], 0.0); }},
    };
    m.ic_residual = [](const std::vector<double>& s, double eps, double y0, double dy0,
                       std::vector<double>& r) {
        const double A = s[0], B = s[1];
        // y(0) and y'(0) of the reconstruction, amplitude derivatives
        // substituted from the eps^1 flow.
        r = {A + B - 0.5 * eps * B * B - y0,
             -B + eps * (-A * A + 2.0 * A * B + B * B) - dy0};
    };
    m.ic_seed = [](double y0, double dy0) { return std::vector<double>{y0 + dy0, -dy0}; };
    m.closed_flow = nullptr;
    return m;
}

// ---- reference problems -----------------------------------------------

// Second-order scalar ODE written as the first-order system (y, y').
struct ReferenceProblem {
    std::string name;
    std::function<void(double, const std::vector<double>&, double, std::vector<double>&)> rhs;
    std::vector<double> initial;
    double eps = 0.0;
    double t_end = 0.0;
};

inline ReferenceProblem damped_linear_reference(double eps, double t_end) {
    return {"damped-linear",
            [](double, const std::vector<double>& s, double e, std::vector<double>& d) {
                d = {s[1], -s[0] - e * s[1]};
            },
            {1.0, 0.0},
            eps,
            t_end};
}

inline ReferenceProblem duffing_reference(double eps, double t_end) {
    return {"duffing",
            [](double, const std::vector<double>& s, double e, std::vector<double>& d) {
                d = {s[1], -s[0] + e * s[0] * s[0] * s[0]};
            },
            {1.0, 0.0},
            eps,
            t_end};
}

inline ReferenceProblem damped_quadratic_reference(double eps, double t_end, double y0,
                                                   double dy0) {
    return {"damped-quadratic",
            [](double, const std::vector<double>& s, double e, std::vector<double>& d) {
                d = {s[1], -s[1] - e * s[0] * s[0]};
            },
            {y0, dy0},
            eps,
            t_end};
}

// High-precision direct solution of the reference problem.
inline Trajectory rk_reference_solve(const ReferenceProblem& problem, double tol = 1e-12) {
    if (!(tol >= 1e-13 && tol <= 1e-6))
        throw DomainError("rk_reference_solve: tol outside [1e-13, 1e-6]");
    if (problem.eps < 0.0 || problem.eps > 0.5)
        throw DomainError("rk_reference_solve: eps outside [0, 0.5]");
    AdaptiveOptions opt;
    opt.tol = tol;
    opt.divergence_norm = 1e9;
    return dormand_prince_solve(
        [&](double t, const std::vector<double>& s, std::vector<double>& d) {
            problem.rhs(t, s, problem.eps, d);
        },
        problem.initial, 0.0, problem.t_end, opt);
}

// ---- closed-form regular expansions ------------------------------------

// First-order regular expansion of the damped oscillator; secular in t.
inline double regular_expansion_damped(double t, double eps) {
    return std::cos(t) - 0.5 * eps * (std::sin(t) + t * std::cos(t));
}

// First-order regular expansion of y' + y + eps y^2 = x, y(1) = 1.
inline double bvp_regular_expansion(double x, double eps) {
    if (x < 0.0 || x > 1.0)
        throw DomainError("bvp_regular_expansion: x outside [0, 1]");
    const double y0 = x - 1.0 + std::exp(1.0 - x);
    const double y1 = -x * x + 4.0 * x - 5.0 + (2.0 * x - x * x) * std::exp(1.0 - x) +
                      std::exp(2.0 - 2.0 * x);
    return y0 + eps * y1;
}

// ---- amplitude-equation operations -------------------------------------

inline Trajectory amplitude_solve(const AmplitudeModel& model, const std::vector<double>& state0,
                                  double eps, double t_end) {
    if (state0.size() != model.dimension)
        throw DomainError("amplitude_solve: state dimension mismatch");
    if (eps < 0.0)
        throw DomainError("amplitude_solve: eps must be nonnegative");
    if (eps > 0.0 && t_end > 10.0 / (eps * eps) * (1.0 + 1e-12))
        throw DomainError("amplitude_solve: horizon exceeds the eps^-2 validity window");
    AdaptiveOptions opt;
    opt.tol = 1e-12;
    opt.divergence_norm = 1e6;
    opt.initial_step = 1e-2;
    return dormand_prince_solve(
        [&](double, const std::vector<double>& s, std::vector<double>& d) {
            model.rhs(s, eps, d);
        },
        state0, 0.0, t_end, opt);
}

inline double reconstruct(const AmplitudeModel& model, const Trajectory& amplitudes, double t,
                          double eps) {
    return model.reconstruction.evaluate(amplitudes.at(t), t, eps);
}

namespace detail {
// Solve J x = r in place for small dense systems (partial pivoting).
inline std::vector<double> solve_dense(std::vector<std::vector<double>> J,
                                       std::vector<double> r) {
    const std::size_t n = r.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t i = col + 1; i < n; ++i)
            if (std::abs(J[i][col]) > std::abs(J[piv][col]))
                piv = i;
        std::swap(J[col], J[piv]);
        std::swap(r[col], r[piv]);
        if (J[col][col] == 0.0)
            throw FitFailure("fit_initial_conditions: singular Newton system");
        for (std::size_t i = col + 1; i < n; ++i) {
            const double f = J[i][col] / J[col][col];
            for (std::size_t j = col; j < n; ++j)
                J[i][j] -= f * J[col][j];
            r[i] -= f * r[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double acc = r[i];
        for (std::size_t j = i + 1; j < n; ++j)
            acc -= J[i][j] * x[j];
        x[i] = acc / J[i][i];
    }
    return x;
}
} // namespace detail

// Newton iteration on the model's IC residual, seeded with the eps = 0
// solution; Jacobian by central differences.
inline std::vector<double> fit_initial_conditions(const AmplitudeModel& model, double y0,
                                                  double dy0, double eps) {
    std::vector<double> s = model.ic_seed(y0, dy0);
    const std::size_t n = s.size();
    std::vector<double> r(n), rp(n), rm(n);
    const double h = 1e-7;

    for (int it = 0; it < 50; ++it) {
        model.ic_residual(s, eps, y0, dy0, r);
        double rn = 0.0;
        for (double v : r)
            rn = std::max(rn, std::abs(v));
        if (rn <= 1e-12)
            return s;

        std::vector<std::vector<double>> J(n, std::vector<double>(n));
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> sp = s, sm = s;
            sp[j] += h;
            sm[j] -= h;
            model.ic_residual(sp, eps, y0, dy0, rp);
            model.ic_residual(sm, eps, y0, dy0, rm);
            for (std::size_t i = 0; i < n; ++i)
                J[i][j] = (rp[i] - rm[i]) / (2.0 * h);
        }
        const std::vector<double> dx = detail::solve_dense(std::move(J), r);
        for (std::size_t i = 0; i < n; ++i)
            s[i] -= dx[i];
    }
    model.ic_residual(s, eps, y0, dy0, r);
    double rn = 0.0;
    for (double v : r)
        rn = std::max(rn, std::abs(v));
    if (rn <= 1e-12)
        return s;
    throw FitFailure("fit_initial_conditions: Newton did not reach 1e-12 in 50 iterations");
}

// ---- cross-derivative compatibility test --------------------------------

struct CompatibilitySample {
    std::vector<double> state;
    std::vector<double> commutator; // J1 f2 - J2 f1
    double norm = 0.0;              // max-norm of the commutator
};

struct CompatibilityReport {
    double max_residual = 0.0;
    std::vector<CompatibilitySample> trace;
};

// Commutator of the two scale flows at each sample: the Jacobian-vector
// products are taken by central differences along the other flow's value
// (step 1e-6). A multiple-scales ansatz is consistent only when this
// vanishes; the report keeps the per-sample values so callers can see
// which component fails.
template <class Flow1, class Flow2>
CompatibilityReport cross_derivative_check(Flow1&& flow1, Flow2&& flow2,
                                           const std::vector<std::vector<double>>& samples) {
    if (samples.empty())
        throw DomainError("cross_derivative_check: no sample states");
    const double h = 1e-6;
    CompatibilityReport report;

    for (const auto& s : samples) {
        const std::size_t n = s.size();
        std::vector<double> f1(n), f2(n), p(n), q(n);
        flow1(s, f1);
        flow2(s, f2);

        auto jvp = [&](auto&& flow, const std::vector<double>& v) {
            std::vector<double> sp = s, sm = s;
            for (std::size_t i = 0; i < n; ++i) {
                sp[i] += h * v[i];
                sm[i] -= h * v[i];
            }
            std::vector<double> fp(n), fm(n), out(n);
            flow(sp, fp);
            flow(sm, fm);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = (fp[i] - fm[i]) / (2.0 * h);
            return out;
        };

        CompatibilitySample sample;
        sample.state = s;
        const auto j1f2 = jvp(flow1, f2);
        const auto j2f1 = jvp(flow2, f1);
        sample.commutator.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            sample.commutator[i] = j1f2[i] - j2f1[i];
            sample.norm = std::max(sample.norm, std::abs(sample.commutator[i]));
        }
        report.max_residual = std::max(report.max_residual, sample.norm);
        report.trace.push_back(std::move(sample));
    }
    return report;
}

} // namespace msm
