#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "msm/nls.hpp"

using namespace msm;
using Cplx = std::complex<double>;

namespace {

EnvelopeField gaussian_envelope(std::size_t n, double L, double amp, double x0, double sigma,
                                double k, double w) {
    EnvelopeField f;
    f.grid = {n, L};
    f.carrier_k = k;
    f.carrier_omega = w;
    f.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (f.grid.node(i) - x0) / sigma;
        f.values[i] = amp * std::exp(-r * r);
    }
    return f;
}

EnvelopeField uniform_envelope(std::size_t n, double L, Cplx value, double k, double w) {
    EnvelopeField f;
    f.grid = {n, L};
    f.carrier_k = k;
    f.carrier_omega = w;
    f.values.assign(n, value);
    return f;
}

double centered(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

} // namespace

// ---- dispersion relations -------------------------------------------------

TEST_CASE("dispersion relations match their closed forms") {
    auto kg = klein_gordon_dispersion();
    CHECK(kg.omega(0.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(kg.omega(1.0) == Catch::Approx(std::sqrt(2.0)).margin(1e-15));

    auto fo = fourth_order_dispersion();
    CHECK(fo.omega(1.0) == Catch::Approx(1.0).margin(1e-15));
    CHECK(fo.omega(3.0) == Catch::Approx(std::sqrt(73.0)).margin(1e-13));
}

TEST_CASE("dispersion derivatives agree with central differences") {
    const double h = 1e-5;
    for (const auto& d : {klein_gordon_dispersion(), fourth_order_dispersion()}) {
        for (double k : {0.3, 1.0, 1.7, 2.9}) {
            CHECK(d.omega_prime(k) == Catch::Approx(centered(d.omega, k, h)).margin(1e-7));
            CHECK(d.omega_double_prime(k) ==
                  Catch::Approx(centered(d.omega_prime, k, h)).margin(1e-7));
        }
    }
}

TEST_CASE("dispersion_eval returns omega and group velocity") {
    auto [w, vg] = dispersion_eval(klein_gordon_dispersion(), 1.0);
    CHECK(w == Catch::Approx(std::sqrt(2.0)).margin(1e-15));
    CHECK(vg == Catch::Approx(1.0 / std::sqrt(2.0)).margin(1e-15));
    CHECK_THROWS_AS(dispersion_eval(klein_gordon_dispersion(), 2e9), DomainError);
}

TEST_CASE("third-harmonic scan finds the matched wavenumber") {
    auto roots = phase_matching_scan(fourth_order_dispersion(), 3, 0.1, 2.0);
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0] - 1.0 / std::sqrt(3.0)) <= 1e-10);
}

TEST_CASE("second-harmonic scan is empty for the Klein-Gordon branch") {
    CHECK(phase_matching_scan(klein_gordon_dispersion(), 2, 0.1, 10.0).empty());
    CHECK(phase_matching_scan(klein_gordon_dispersion(), 3, 0.1, 2.0).empty());
}

TEST_CASE("phase matching scan rejects the trivial harmonic") {
    CHECK_THROWS_AS(phase_matching_scan(fourth_order_dispersion(), 1, 0.1, 2.0), DomainError);
}

// ---- pseudo-spectral reference solver --------------------------------------

TEST_CASE("linear plane wave travels at the exact phase speed") {
    const double L = 64.0 * 2.0 * M_PI;
    const std::size_t n = 512;
    const double t_end = 10.0;

    struct Case {
        WaveEquation eq;
        double omega;
    };
    for (const auto& c : {Case{klein_gordon_equation(), std::sqrt(2.0)},
                          Case{fourth_order_equation(), 1.0}}) {
        WaveField f;
        f.grid = {n, L};
        f.u.resize(n);
        f.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double x = f.grid.node(i);
            f.u[i] = std::cos(x);
            f.v[i] = c.omega * std::sin(x);
        }
        auto run = spectral_reference_solve(c.eq, f, 0.0, t_end, 0.01);

        WaveField exact = f;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = exact.grid.node(i);
            exact.u[i] = std::cos(x - c.omega * t_end);
            exact.v[i] = c.omega * std::sin(x - c.omega * t_end);
        }
        auto [l2, linf] = envelope_error(exact, run.final_field());
        CHECK(l2 < 1e-7);
        CHECK(linf < 1e-7);
    }
}

TEST_CASE("linear energy is conserved for both equations") {
    const double L = 100.0;
    const std::size_t n = 256;
    WaveField f;
    f.grid = {n, L};
    f.u.resize(n);
    f.v.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = (f.grid.node(i) - 50.0) / 5.0;
        f.u[i] = std::exp(-r * r);
    }
    for (const auto& eq : {klein_gordon_equation(), fourth_order_equation()}) {
        const double e0 = spectral_energy(eq, f);
        const double dt = 0.1 / eq.dispersion.omega(M_PI * static_cast<double>(n) / L);
        auto run = spectral_reference_solve(eq, f, 0.0, 10.0, dt);
        const double e1 = spectral_energy(eq, run.final_field());
        CHECK(std::abs(e1 - e0) / e0 < 1e-8);
    }
}

TEST_CASE("reference solver validates grid, step, and horizon") {
    WaveField bad;
    bad.grid = {100, 10.0};
    bad.u.assign(100, 0.0);
    bad.v.assign(100, 0.0);
    CHECK_THROWS_AS(spectral_reference_solve(klein_gordon_equation(), bad, 0.1, 1.0, 0.01),
                    PreconditionError);

    WaveField f;
    f.grid = {8, 2.0 * M_PI};
    f.u.assign(8, 0.1);
    f.v.assign(8, 0.0);
    // max wavenumber 4 gives omega ~ 4.12, so the step cap is ~0.0485
    CHECK_THROWS_AS(spectral_reference_solve(klein_gordon_equation(), f, 0.1, 1.0, 0.1),
                    PreconditionError);
    CHECK_THROWS_AS(spectral_reference_solve(klein_gordon_equation(), f, 0.1, -1.0, 0.01),
                    DomainError);
    CHECK_THROWS_AS(spectral_reference_solve(klein_gordon_equation(), f, 0.1, 1.0, 0.0),
                    DomainError);
}

TEST_CASE("quadratic blow-up is reported as divergence") {
    WaveField f;
    f.grid = {8, 2.0 * M_PI};
    f.u.assign(8, 100.0);
    f.v.assign(8, 0.0);
    CHECK_THROWS_AS(spectral_reference_solve(klein_gordon_equation(), f, 0.5, 10.0, 0.04),
                    DivergenceFailure);
}

// ---- envelope utilities ----------------------------------------------------

TEST_CASE("envelope validation rejects broadband fields") {
    auto good = gaussian_envelope(128, 100.0, 1.0, 50.0, 8.0, 1.0, std::sqrt(2.0));
    CHECK_NOTHROW(validate_envelope(good));
    CHECK(envelope_band_fraction(good) < 1e-12);

    auto bad = good;
    for (std::size_t i = 0; i < bad.values.size(); ++i)
        bad.values[i] = (i % 2 == 0) ? 1.0 : -1.0;
    CHECK_THROWS_AS(validate_envelope(bad), PreconditionError);

    auto odd = good;
    odd.grid.n = 100;
    odd.values.resize(100);
    CHECK_THROWS_AS(validate_envelope(odd), PreconditionError);
}

TEST_CASE("spectral resampling round-trips and preserves mass") {
    auto a = gaussian_envelope(256, 100.0, 0.8, 40.0, 6.0, 1.0, std::sqrt(2.0));
    auto up = spectral_resample(a, 512);
    auto back = spectral_resample(up, 256);

    CHECK(std::abs(envelope_mass(up) - envelope_mass(a)) < 1e-10);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        worst = std::max(worst, std::abs(back.values[i] - a.values[i]));
    CHECK(worst < 1e-12);
}

TEST_CASE("centroid of a symmetric packet sits at its center") {
    auto a = gaussian_envelope(256, 100.0, 0.8, 30.0, 5.0, 1.0, std::sqrt(2.0));
    CHECK(envelope_centroid(a) == Catch::Approx(30.0).margin(1e-6));

    auto zero = uniform_envelope(16, 10.0, 0.0, 1.0, 1.0);
    CHECK_THROWS_AS(envelope_centroid(zero), DomainError);
}

TEST_CASE("envelope_error requires matching grids") {
    WaveField a;
    a.grid = {16, 10.0};
    a.u.assign(16, 1.0);
    a.v.assign(16, 0.0);
    WaveField b;
    b.grid = {32, 10.0};
    b.u.assign(32, 1.0);
    b.v.assign(32, 0.0);
    CHECK_THROWS_AS(envelope_error(a, b), DomainError);
}

// ---- split-step integrator -------------------------------------------------

TEST_CASE("uniform envelope undergoes the exact Kerr rotation") {
    const Cplx a0(0.4, 0.3);
    auto f = uniform_envelope(16, 10.0, a0, 1.0, std::sqrt(2.0));
    const double gamma = 1.3, t_end = 5.0;
    auto symbol = envelope_symbol(f.grid, 0.7, 0.3);
    auto run = strang_solve(f, symbol, kerr_rotation(gamma), t_end, 0.5);

    const Cplx expect = a0 * std::exp(Cplx(0.0, gamma * std::norm(a0) * t_end));
    for (const auto& z : run.final_field().values)
        CHECK(std::abs(z - expect) < 1e-12);
}

TEST_CASE("split step validates its step size") {
    auto f = uniform_envelope(16, 10.0, 0.5, 1.0, std::sqrt(2.0));
    auto symbol = envelope_symbol(f.grid, 0.7, 0.3);
    CHECK_THROWS_AS(strang_solve(f, symbol, kerr_rotation(1.0), 1.0, 0.6), PreconditionError);
    CHECK_THROWS_AS(strang_solve(f, symbol, kerr_rotation(1.0), 1.0, 0.0), PreconditionError);
    CHECK_THROWS_AS(strang_solve(f, symbol, kerr_rotation(1.0), -1.0, 0.5), DomainError);
}

TEST_CASE("split step conserves envelope mass") {
    auto model = kg_envelope_model(1.0);
    auto a0 = gaussian_envelope(256, 102.4, 0.7, 50.0, 10.0, 1.0, model.carrier_omega);
    auto run = nls_solve(model, a0, 0.1, 20.0, 0.25);
    const double m0 = envelope_mass(a0);
    const double m1 = envelope_mass(run.final_field());
    CHECK(std::abs(m1 - m0) / m0 < 1e-10);
}

TEST_CASE("split step is second order in the step size") {
    const double eps = 0.1, k = 1.0;
    auto model = kg_envelope_model(k);
    auto a0 = gaussian_envelope(512, 409.6, 0.7, 100.0, 20.0, k, model.carrier_omega);
    auto fine = nls_solve(model, a0, eps, 20.0, 0.0078125);

    double errs[3];
    int idx = 0;
    for (double dt : {0.5, 0.25, 0.125}) {
        auto run = nls_solve(model, a0, eps, 20.0, dt);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < a0.values.size(); ++i) {
            num += std::norm(run.final_field().values[i] - fine.final_field().values[i]);
            den += std::norm(fine.final_field().values[i]);
        }
        errs[idx++] = std::sqrt(num / den);
    }
    const double p1 = std::log2(errs[0] / errs[1]);
    const double p2 = std::log2(errs[1] / errs[2]);
    CHECK((p1 >= 1.8 && p1 <= 2.2));
    CHECK((p2 >= 1.8 && p2 <= 2.2));
}

// ---- envelope models and reconstruction ------------------------------------

TEST_CASE("envelope model coefficients match the dispersion data") {
    auto kg = kg_envelope_model(1.0);
    const double w = std::sqrt(2.0);
    CHECK(kg.v_g == Catch::Approx(1.0 / w).margin(1e-15));
    CHECK(kg.beta2 == Catch::Approx(1.0 / (2.0 * w * w * w)).margin(1e-15));
    CHECK(kg.kerr == Catch::Approx(5.0 / (3.0 * w)).margin(1e-15));
    CHECK(kg.kerr_eps_power == 2);

    auto fo = fourth_order_envelope_model(1.0);
    CHECK(fo.v_g == Catch::Approx(1.0).margin(1e-15));
    CHECK(fo.beta2 == 0.0);
    CHECK(fo.kerr == Catch::Approx(1.5).margin(1e-15));
    CHECK(fo.kerr_eps_power == 1);
}

TEST_CASE("reconstruction of a uniform envelope matches the harmonic table") {
    const double a = 0.3, eps = 0.1, k = 1.0;
    auto model = kg_envelope_model(k);
    auto f = uniform_envelope(64, 32.0, a, k, model.carrier_omega);
    auto field = reconstruct_field(model, f, eps, 0.0);

    const double w = model.carrier_omega;
    for (std::size_t i = 0; i < field.u.size(); ++i) {
        const double x = field.grid.node(i);
        const double expect_u = 2.0 * a * std::cos(k * x) +
                                eps * (2.0 * a * a - (2.0 / 3.0) * a * a * std::cos(2.0 * k * x));
        const double expect_v = 2.0 * a * w * std::sin(k * x);
        CHECK(std::abs(field.u[i] - expect_u) < 1e-12);
        CHECK(std::abs(field.v[i] - expect_v) < 1e-12);
    }
}

TEST_CASE("wave packet tracks the pseudo-spectral reference") {
    const double eps = 0.1, k = 1.0, L = 409.6, sigma = 20.0, x0 = 100.0, amp = 0.7;
    const double t_end = 100.0;
    auto model = kg_envelope_model(k);

    auto a0_fine = gaussian_envelope(4096, L, amp, x0, sigma, k, model.carrier_omega);
    auto a0 = gaussian_envelope(512, L, amp, x0, sigma, k, model.carrier_omega);
    auto u0 = reconstruct_field(model, a0_fine, eps, 0.0);
    auto ref = spectral_reference_solve(klein_gordon_equation(), u0, eps, t_end, 0.00625);
    auto env = nls_solve(model, a0, eps, t_end, 0.5);

    auto a_up = spectral_resample(env.final_field(), 4096);
    auto u_ms = reconstruct_field(model, a_up, eps, t_end);
    auto [l2, linf] = envelope_error(ref.final_field(), u_ms);
    CHECK(l2 < 0.05);

    const double drift = std::abs(envelope_mass(env.final_field()) - envelope_mass(a0)) /
                         envelope_mass(a0);
    CHECK(drift < 1e-10);

    const double speed = (envelope_centroid(env.final_field()) - envelope_centroid(a0)) / t_end;
    CHECK(std::abs(speed - model.v_g) < 1e-3);
}

TEST_CASE("fourth-order packet stays close to its reference over t = 1/eps") {
    const double eps = 0.1, k = 1.0, L = 409.6, sigma = 40.0, x0 = 120.0, amp = 0.5;
    const double t_end = 10.0;
    auto model = fourth_order_envelope_model(k);

    auto a0_fine = gaussian_envelope(2048, L, amp, x0, sigma, k, model.carrier_omega);
    auto a0 = gaussian_envelope(512, L, amp, x0, sigma, k, model.carrier_omega);
    auto u0 = reconstruct_field(model, a0_fine, eps, 0.0);
    const double kmax = M_PI * 2048.0 / L;
    const double dt = 0.19 / model.dispersion.omega(kmax);
    auto ref = spectral_reference_solve(fourth_order_equation(), u0, eps, t_end, dt);
    auto env = nls_solve(model, a0, eps, t_end, 0.25);

    auto a_up = spectral_resample(env.final_field(), 2048);
    auto u_ms = reconstruct_field(model, a_up, eps, t_end);
    auto [l2, linf] = envelope_error(ref.final_field(), u_ms);
    CHECK(l2 < 0.05);
    CHECK(linf < 0.05);
}

// ---- coupled phase-matched pair ---------------------------------------------

TEST_CASE("coupled solver requires a phase-matched carrier") {
    auto model = fourth_order_envelope_model(1.0);
    auto a0 = uniform_envelope(64, 50.0, 0.3, 1.0, model.carrier_omega);
    auto b0 = uniform_envelope(64, 50.0, 0.0, 3.0, model.dispersion.omega(3.0));
    CHECK_THROWS_AS(coupled_solve(model, a0, b0, 0.1, 1.0, 0.01), PreconditionError);
}

TEST_CASE("harmonic envelope grows at the secular forcing rate") {
    const double k = 1.0 / std::sqrt(3.0);
    const double eps = 0.1, amp = 0.3;
    auto model = fourth_order_envelope_model(k);
    const double w3 = model.dispersion.omega(3.0 * k);
    CHECK(w3 == Catch::Approx(3.0 * model.carrier_omega).margin(1e-12));

    auto a0 = uniform_envelope(64, 50.0, amp, k, model.carrier_omega);
    auto b0 = uniform_envelope(64, 50.0, 0.0, 3.0 * k, w3);

    // |B| ~ eps |A|^3 t / (2 w(3k)) while B stays small
    auto early = coupled_solve(model, a0, b0, eps, 0.5, 0.01);
    const double rate = std::abs(early.b_fields.back().values[0]) / 0.5;
    const double expect = eps * amp * amp * amp / (2.0 * w3);
    CHECK(std::abs(rate - expect) / expect < 1e-3);

    auto late = coupled_solve(model, a0, b0, eps, 20.0, 0.01);
    const double b_late = std::abs(late.b_fields.back().values[0]);
    CHECK(b_late > 10.0 * std::abs(early.b_fields.back().values[0]));

    const double p0 = coupled_power_proxy(model, a0, b0);
    const double p1 = coupled_power_proxy(model, late.a_fields.back(), late.b_fields.back());
    CHECK(std::abs(p1 - p0) / p0 < 0.02);
}

TEST_CASE("coupled reconstruction carries both harmonics") {
    const double k = 1.0 / std::sqrt(3.0);
    auto model = fourth_order_envelope_model(k);
    const double w1 = model.carrier_omega;
    const double w3 = model.dispersion.omega(3.0 * k);
    auto a = uniform_envelope(64, 50.0, 0.3, k, w1);
    auto b = uniform_envelope(64, 50.0, 0.1, 3.0 * k, w3);

    auto field = reconstruct_coupled_field(model, a, b, 0.0);
    for (std::size_t i = 0; i < field.u.size(); ++i) {
        const double x = field.grid.node(i);
        const double expect_u = 0.6 * std::cos(k * x) + 0.2 * std::cos(3.0 * k * x);
        const double expect_v = 0.6 * w1 * std::sin(k * x) + 0.2 * w3 * std::sin(3.0 * k * x);
        CHECK(std::abs(field.u[i] - expect_u) < 1e-12);
        CHECK(std::abs(field.v[i] - expect_v) < 1e-12);
    }
}
