#include <doctest.h>

#include <cmath>

#include "kgstark/fields.hpp"
#include "kgstark/quadrature.hpp"

using namespace kgstark;

TEST_CASE("closed-form field values") {
    auto cst = FieldModel::constant({1.0});
    CHECK(cst.eval_field(0.0, 1.0)[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cst.eval_field(17.5, 1.0)[0] == doctest::Approx(1.0).epsilon(1e-15));

    auto pl = FieldModel::power_law(0.5, 1.0);
    CHECK(pl.eval_field(4.0, 1.0)[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(pl.eval_b(9.0, 1.0)[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(pl.eval_b(0.0, 1.0)[0] == 0.0);

    auto lg = FieldModel::logarithmic(1.0, 1.0);
    CHECK(lg.eval_field(0.0, 1.0)[0] == doctest::Approx(1.0).epsilon(1e-15));
    auto lg2 = FieldModel::logarithmic(2.0, 1.0);
    CHECK(lg2.eval_b(M_E - 1.0, 1.0)[0] == doctest::Approx(2.0).epsilon(1e-14));

    auto cst2 = FieldModel::constant({2.0});
    CHECK(cst2.eval_b(3.0, 1.0)[0] == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("b' equals q*E for every kind") {
    std::vector<FieldModel> models;
    models.push_back(FieldModel::constant({0.7, -0.3}));
    models.push_back(FieldModel::power_law(0.5, 1.3));
    models.push_back(FieldModel::power_law(1.0, 0.8, {0.1}, {{0.2, 1.7}}));
    models.push_back(FieldModel::logarithmic(1.5, 0.7));
    models.push_back(FieldModel::sinusoidal());
    const double q = 1.75;
    for (const auto& m : models) {
        for (double t : {0.25, 1.0, 7.5, 42.0}) {
            Vec bp = m.eval_b_prime(t, q);
            Vec e = m.eval_field(t, q);
            for (int i = 0; i < m.dimension(); ++i) CHECK(std::abs(bp[i] - q * e[i]) <= 1e-12);
        }
    }
}

TEST_CASE("primitive agrees with quadrature of qE") {
    const double q = 1.25;

    auto pl = FieldModel::power_law(0.5, 2.0);
    for (double t : {0.5, 4.0, 50.0}) {
        double ref = integrate_de([&](double s) { return pl.eval_b_prime(s, q)[0]; }, 0.0, t);
        CHECK(pl.eval_b(t, q)[0] == doctest::Approx(ref).epsilon(1e-8));
    }

    auto lg = FieldModel::logarithmic(1.5, 2.0);
    for (double t : {0.5, 10.0, 200.0}) {
        double ref = integrate_gk([&](double s) { return lg.eval_b_prime(s, q)[0]; }, 0.0, t);
        CHECK(lg.eval_b(t, q)[0] == doctest::Approx(ref).epsilon(1e-8));
    }

    auto sn = FieldModel::sinusoidal();
    for (int axis : {0, 1}) {
        double t = 30.0;
        double ref = integrate_de([&](double s) { return sn.eval_b_prime(s, q)[axis]; }, 0.0, t);
        CHECK(sn.eval_b(t, q)[axis] == doctest::Approx(ref).epsilon(1e-8));
    }

    auto pl_pert = FieldModel::power_law(1.0, 0.9, {0.05, -0.02}, {{0.1, 2.0}});
    for (double t : {1.0, 25.0}) {
        double ref = integrate_gk([&](double s) { return pl_pert.eval_b_prime(s, q)[0]; }, 0.0, t);
        CHECK(pl_pert.eval_b(t, q)[0] == doctest::Approx(ref).epsilon(1e-8));
    }
}

TEST_CASE("tabulated model interpolates and integrates") {
    std::vector<double> ts, es;
    for (int i = 0; i <= 400; ++i) {
        double t = -1.0 + 101.0 * i / 400.0;
        ts.push_back(t);
        es.push_back(std::exp(-0.01 * t) * 0.5 + 0.1 * std::sin(0.3 * t));
    }
    auto tab = FieldModel::tabulated(ts, es);
    const double q = 2.0;

    CHECK(tab.eval_b(0.0, q)[0] == 0.0);
    for (double t : {3.0, 40.0, 90.0}) {
        double ref = integrate_gk([&](double s) { return tab.eval_b_prime(s, q)[0]; }, 0.0, t, 1e-12);
        CHECK(tab.eval_b(t, q)[0] == doctest::Approx(ref).epsilon(1e-8));
    }
    CHECK_THROWS_AS(tab.eval_field(1000.0, q), RangeError);
    CHECK_THROWS_AS(tab.eval_field(-2.0, q), RangeError);
}

TEST_CASE("physical parameter constraints") {
    PhysicalParams p;
    p.m = 0.0;
    CHECK_THROWS(p.validate());
    p = PhysicalParams{};
    p.q = 0.0;
    CHECK_THROWS(p.validate());
    p = PhysicalParams{};
    p.n = 3;
    CHECK_THROWS(p.validate());
}

TEST_CASE("integral audit verdicts for the catalog") {
    PhysicalParams params;
    std::vector<double> horizons{1e2, 1e3, 1e4};

    SUBCASE("power law passes and e0 matches the exact sublevel mass") {
        auto pl = FieldModel::power_law(0.5, 1.0);
        auto rep = audit_e1(pl, params, Vec::zero(1), horizons);
        CHECK(rep.verdict == E1Verdict::PASS);
        // radius = 2 sup|b'| / mc^2 = 1, region {sqrt(s) <= 1}, mass b(1) = 1
        CHECK(rep.sublevel_radius == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(rep.e0_estimate == doctest::Approx(1.0).epsilon(1e-6));
        CHECK_FALSE(rep.growth_flag);
    }

    SUBCASE("gamma = 1 passes") {
        auto pl1 = FieldModel::power_law(1.0, 1.0);
        auto rep = audit_e1(pl1, params, Vec::zero(1), horizons);
        CHECK(rep.verdict == E1Verdict::PASS);
    }

    SUBCASE("logarithmic passes with exact e0") {
        auto lg = FieldModel::logarithmic(1.0, 1.0);
        auto rep = audit_e1(lg, params, Vec::zero(1), horizons);
        CHECK(rep.verdict == E1Verdict::PASS);
        CHECK(rep.e0_estimate == doctest::Approx(2.0).epsilon(1e-6));
    }

    SUBCASE("AC component fails via e1 growth") {
        auto sn = FieldModel::sinusoidal();
        auto rep = audit_e1(sn, params, Vec::zero(2), horizons);
        CHECK(rep.verdict == E1Verdict::FAIL);
        CHECK(rep.growth_flag);
        CHECK(rep.e1_by_horizon[2] > rep.e1_by_horizon[1]);
    }

    SUBCASE("zero field is not applicable") {
        auto z = FieldModel::constant({0.0});
        auto rep = audit_e1(z, params, Vec::zero(1), horizons);
        CHECK(rep.verdict == E1Verdict::NOT_APPLICABLE);
    }

    SUBCASE("verdicts are monotone in horizon once failing") {
        auto sn = FieldModel::sinusoidal();
        auto early = audit_e1(sn, params, Vec::zero(2), {1e2, 1e3});
        auto late = audit_e1(sn, params, Vec::zero(2), {1e2, 1e3, 1e4});
        CHECK(early.verdict == E1Verdict::FAIL);
        CHECK(late.verdict == E1Verdict::FAIL);
    }

    SUBCASE("offset vector does not flip the verdict") {
        auto pl = FieldModel::power_law(0.5, 1.0);
        Vec a(3.0);
        auto rep = audit_e1(pl, params, a, horizons);
        CHECK(rep.verdict == E1Verdict::PASS);
    }
}
