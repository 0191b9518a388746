#include <doctest.h>

#include <cmath>

#include "kgstark/modes.hpp"

using namespace kgstark;

namespace {
Dispersion free_dispersion() { return Dispersion(PhysicalParams{}, FieldModel::constant({0.0})); }
Dispersion linear_dispersion() { return Dispersion(PhysicalParams{}, FieldModel::power_law(1.0, 1.0)); }
Dispersion sqrt_dispersion() { return Dispersion(PhysicalParams{}, FieldModel::power_law(0.5, 1.0)); }
}  // namespace

TEST_CASE("dispersion evaluation") {
    auto free = free_dispersion();
    auto ev = free.eval(5.0, Vec(0.0));
    CHECK(ev.L == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ev.Q == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ev.Qlog == 0.0);

    auto lin = linear_dispersion();
    auto ev2 = lin.eval(1.0, Vec(0.0));
    CHECK(ev2.L == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(ev2.Q == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(ev2.Qlog == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("log-derivative bound |Q'/Q| <= c|b'|/(mc^2)") {
    PhysicalParams p;
    p.c = 2.0;
    p.m = 0.5;
    Dispersion disp(p, FieldModel::logarithmic(1.5, 0.8));
    for (double t : {0.1, 1.0, 10.0, 100.0}) {
        for (double x : {-3.0, 0.0, 2.0}) {
            auto ev = disp.eval(t, Vec(x));
            double bound = p.c * disp.field().eval_b_prime(t, p.q).norm() / p.mc2();
            CHECK(std::abs(ev.Qlog) <= bound * (1 + 1e-12));
        }
    }
}

TEST_CASE("free evolution is the constant oscillator") {
    auto disp = free_dispersion();
    auto samples = linspace(0.0, M_PI, 9);

    auto tr = integrate_direct(disp, Vec(0.0), M_PI, 1e-12, samples);
    CHECK(tr.zeta0.back() == doctest::Approx(-1.0).epsilon(1e-10));
    CHECK(std::abs(tr.zeta1.back()) <= 1e-10);
    CHECK(tr.zeta0.front() == 1.0);
    CHECK(tr.zeta1p.front() == 1.0);

    auto ap = integrate_amplitude_phase(disp, Vec(0.0), M_PI, 1e-12, samples);
    for (size_t i = 0; i < ap.size(); ++i) {
        CHECK(ap.A[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ap.C[i] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(ap.B[i] == doctest::Approx(ap.times[i]).epsilon(1e-12));
        CHECK(ap.D[i] == doctest::Approx(ap.times[i]).epsilon(1e-12));
    }
    CHECK(wronskian_deviation(ap) <= 1e-12);

    auto env = envelope_check(ap);
    CHECK(env.g0_sup == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(env.g0_inf == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(env.g1_sup == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(env.g1_inf == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("amplitude-phase initial data") {
    PhysicalParams p;
    p.c = 1.5;
    p.m = 2.0;
    Dispersion disp(p, FieldModel::logarithmic(1.0, 1.0));
    Vec xi(0.75);
    auto tr = integrate_amplitude_phase(disp, xi, 1.0, 1e-11, linspace(0.0, 1.0, 5));
    CHECK(tr.A.front() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tr.B.front() == 0.0);
    CHECK(tr.C.front() == doctest::Approx(1.0 / disp.Q(0.0, xi)).epsilon(1e-14));
    CHECK(tr.D.front() == 0.0);
}

TEST_CASE("wronskian deviation stays at solver accuracy") {
    auto lin = linear_dispersion();
    auto samples = linspace(0.0, 50.0, 64);
    auto tr = integrate_direct(lin, Vec(0.0), 50.0, 1e-10, samples);
    CHECK(wronskian_deviation(tr) <= 1e-8);

    // reference at tighter tolerance confirms the run itself
    auto ref = integrate_direct(lin, Vec(0.0), 50.0, 1e-13, samples);
    for (size_t i = 0; i < tr.size(); ++i) {
        CHECK(std::abs(tr.zeta0[i] - ref.zeta0[i]) <= 1e-7);
        CHECK(std::abs(tr.zeta1[i] - ref.zeta1[i]) <= 1e-7);
    }
}

TEST_CASE("routes agree on a fractional power-law impulse") {
    auto disp = sqrt_dispersion();
    Vec xi(1.0);
    auto samples = linspace(0.0, 100.0, 257);
    auto dtr = integrate_direct(disp, xi, 100.0, 1e-11, samples);
    auto atr = integrate_amplitude_phase(disp, xi, 100.0, 1e-11, samples);
    double worst = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        worst = std::max(worst, std::abs(dtr.zeta0[i] - atr.zeta0[i]));
        worst = std::max(worst, std::abs(dtr.zeta1[i] - atr.zeta1[i]));
    }
    CHECK(worst <= 1e-7);
}

TEST_CASE("wronskian scales with tolerance across routes") {
    auto disp = sqrt_dispersion();
    for (Route route : {Route::direct, Route::amplitude_phase}) {
        for (double tol : {1e-8, 1e-10}) {
            SolveOptions opts{tol, route};
            auto tr = solve_mode(disp, Vec(-2.0), 100.0, opts, linspace(0.0, 100.0, 101));
            CHECK(wronskian_deviation(tr) <= 100 * tol);
        }
    }
}

TEST_CASE("representation identity G0*G1*cos(B-D) = 1") {
    auto disp = sqrt_dispersion();
    double tol = 1e-10;
    auto tr = integrate_amplitude_phase(disp, Vec(2.0), 100.0, tol, linspace(0.0, 100.0, 401));
    for (size_t i = 0; i < tr.size(); ++i) {
        double lhs = tr.G0[i] * tr.G1[i] * std::cos(tr.B[i] - tr.D[i]);
        CHECK(std::abs(lhs - 1.0) <= 100 * tol);
    }
}

TEST_CASE("phase grows at least at half the frequency away from low momentum") {
    auto disp = sqrt_dispersion();
    const auto& params = disp.params();
    double radius = 2.0 * disp.field().b_prime_sup(params.q) / params.mc2();
    Vec xi(2.0);
    auto tr = integrate_amplitude_phase(disp, xi, 100.0, 1e-10, linspace(0.0, 100.0, 2001));
    for (size_t i = 0; i < tr.size(); ++i) {
        double t = tr.times[i];
        if (t == 0.0) continue;
        Vec w = disp.field().eval_b(t, params.q);
        w += xi;
        if (w.norm() > radius) {
            auto ev = disp.eval(t, xi);
            double bprime = ev.Q - ev.Qlog * std::sin(tr.B[i]) * std::cos(tr.B[i]);
            CHECK(bprime >= 0.5 * ev.Q * (1 - 1e-12));
        }
    }
}

TEST_CASE("mode samples satisfy the oscillator equation discretely") {
    auto disp = sqrt_dispersion();
    Vec xi(1.5);
    // second differences of dense samples: residual should scale like dt^2
    double t0 = 20.0;
    std::vector<double> residual;
    for (double dt : {1e-3, 5e-4}) {
        auto tr = integrate_direct(disp, xi, t0 + 2 * dt, 1e-12, {t0 - 2 * dt, t0 - dt, t0, t0 + dt, t0 + 2 * dt});
        double dd = (tr.zeta0[3] - 2 * tr.zeta0[2] + tr.zeta0[1]) / (dt * dt);
        residual.push_back(std::abs(dd + disp.L(t0, xi) * tr.zeta0[2]));
    }
    CHECK(residual[1] <= residual[0] * 0.5);  // ~ (1/2)^2 with margin
}

TEST_CASE("envelope extrema stabilize across decade horizons") {
    auto disp = sqrt_dispersion();
    Vec xi(0.0);
    SolveOptions opts{1e-9, Route::amplitude_phase};
    std::vector<EnvelopeExtrema> envs;
    for (double T : {1e2, 1e3, 1e4}) {
        auto tr = solve_mode(disp, xi, T, opts, logspace(1e-2, T, 600));
        envs.push_back(envelope_check(tr));
    }
    CHECK(std::abs(envs[2].g0_sup - envs[1].g0_sup) <= 0.01 * envs[1].g0_sup);
    CHECK(std::abs(envs[2].g1_sup - envs[1].g1_sup) <= 0.01 * envs[1].g1_sup);
    CHECK(envs[2].g0_inf > 0.0);
    CHECK(envs[2].g1_inf > 0.0);
}

TEST_CASE("trajectory serialization and time lookup") {
    auto disp = linear_dispersion();
    auto tr = integrate_direct(disp, Vec(0.5), 10.0, 1e-10, linspace(0.0, 10.0, 11));
    auto csv = trajectory_csv(tr);
    CHECK(csv.rfind("t,zeta0,zeta0p,zeta1,zeta1p,A,B,C,D,G0,G1,Q\n", 0) == 0);
    CHECK(tr.index_of(3.0) == 3);
    CHECK_THROWS_AS(tr.index_of(3.14), RangeError);
}

TEST_CASE("solver rejects out-of-range tolerances") {
    auto disp = free_dispersion();
    CHECK_THROWS(integrate_direct(disp, Vec(0.0), 1.0, 1e-3, {1.0}));
    CHECK_THROWS(integrate_direct(disp, Vec(0.0), 1.0, 1e-14, {1.0}));
}
