/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmwcov/blockage.hpp"
#include "mmwcov/common.hpp"
#include "mmwcov/quadrature.hpp"

using namespace mmwcov;
using namespace mmwcov::blockage;

TEST_CASE("three_gpp_urban LOS probability") {
    const LosModel m = ThreeGppUrban{18.0, 63.0};
    CHECK(p_los(m, 10.0) == doctest::Approx(1.0));  // min(A/d,1) = 1 below A
    const double e = std::exp(-100.0 / 63.0);
    CHECK(p_los(m, 100.0) == doctest::Approx(0.18 * (1.0 - e) + e).epsilon(1e-12));
    CHECK(p_los(m, 100.0) == doctest::Approx(0.3476).epsilon(1e-3));
    CHECK_THROWS_AS(p_los(m, -1.0), std::domain_error);
}

TEST_CASE("suburban and ball LOS probabilities") {
    CHECK(p_los(SuburbanExp{200.0}, 200.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(p_los(LosBall{200.0}, 100.0) == 1.0);
    CHECK(p_los(LosBall{200.0}, 300.0) == 0.0);
    CHECK(p_los(GeneralizedLosBall{200.0, 0.3}, 100.0) == doctest::Approx(0.3));
    CHECK(p_los(GeneralizedLosBall{200.0, 0.3}, 250.0) == 0.0);
}

TEST_CASE("empirical table interpolation clamps at endpoints") {
    EmpiricalTable t;
    t.distances_m = {10.0, 20.0, 30.0};
    t.probs = {1.0, 0.5, 0.1};
    const LosModel m = t;
    CHECK(p_los(m, 0.0) == 1.0);
    CHECK(p_los(m, 15.0) == doctest::Approx(0.75));
    CHECK(p_los(m, 25.0) == doctest::Approx(0.3));
    CHECK(p_los(m, 100.0) == doctest::Approx(0.1));
}

TEST_CASE("LOS probability stays in [0,1] and is monotone where expected") {
    const std::vector<LosModel> models = {
        ThreeGppUrban{18.0, 63.0}, SuburbanExp{200.0}, LosBall{150.0},
        GeneralizedLosBall{150.0, 0.4},
        EmpiricalTable{{5.0, 50.0, 200.0, 400.0}, {0.95, 0.7, 0.2, 0.05}}};
    for (const auto& m : models) {
        for (double d = 0.0; d <= 1000.0; d += 7.3) {
            const double p = p_los(m, d);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    }
    double prev = 1.0;
    for (double d = 1.0; d < 2000.0; d *= 1.1) {
        const double p = p_los(LosModel{SuburbanExp{120.0}}, d);
        CHECK(p < prev);
        prev = p;
    }
    prev = p_los(LosModel{ThreeGppUrban{18.0, 63.0}}, 18.0);
    for (double d = 18.5; d < 2000.0; d += 3.7) {
        const double p = p_los(LosModel{ThreeGppUrban{18.0, 63.0}}, d);
        CHECK(p <= prev + 1e-12);
        prev = p;
    }
}

TEST_CASE("radial integral matches quadrature for every variant") {
    const std::vector<LosModel> models = {
        ThreeGppUrban{18.0, 63.0}, SuburbanExp{140.0}, LosBall{220.0},
        GeneralizedLosBall{220.0, 0.35},
        EmpiricalTable{{5.0, 60.0, 150.0, 320.0}, {1.0, 0.6, 0.25, 0.02}}};
    const Quadrature quad{1e-10, 1e-13, 1e-12, 20000};
    for (const auto& m : models) {
        for (const double x : {3.0, 17.0, 90.0, 219.0, 221.0, 700.0}) {
            const double expected =
                integrate([&](double r) { return p_los(m, r) * r; }, 0.0, x, quad, "oracle");
            CHECK(p_los_radial_integral(m, x) == doctest::Approx(expected).epsilon(1e-8));
        }
    }
}

TEST_CASE("random shape theory decay distance") {
    // lambda * E[L] = pi * 1e-4 * 100 per meter gives C = 100 m exactly.
    BuildingStats stats;
    stats.density_per_m2 = kPi * 1e-4;
    stats.mean_perimeter_m = 100.0;
    CHECK(rst_c(stats, RstMethod::perimeter) == doctest::Approx(100.0).epsilon(1e-12));

    // Stats consistent with a 27% covered fraction and C = 85 m via the
    // area route.
    stats.covered_fraction = 0.27;
    stats.mean_area_m2 = 85.0 * (-std::log(1.0 - 0.27)) * stats.mean_perimeter_m / kPi;
    CHECK(rst_c(stats, RstMethod::area) == doctest::Approx(85.0).epsilon(1e-9));

    BuildingStats bad;
    CHECK_THROWS_AS(rst_c(bad, RstMethod::perimeter), std::domain_error);
    stats.covered_fraction = 0.0;
    CHECK_THROWS_AS(rst_c(stats, RstMethod::area), std::domain_error);
    stats.covered_fraction = 1.0;
    CHECK_THROWS_AS(rst_c(stats, RstMethod::area), std::domain_error);
}

TEST_CASE("LOS ball radius matches the mean-LOS-area oracle") {
    BuildingStats stats;
    stats.density_per_m2 = kPi * 1e-4;
    stats.mean_perimeter_m = 100.0;  // C = 100 m
    const double c = rst_c(stats, RstMethod::perimeter);
    const double r_b = los_ball_radius(stats);

    // Oracle: ball area == mean LOS area of the exponential model,
    // pi R^2 == 2 pi int_0^inf exp(-r/C) r dr, both evaluated numerically.
    const Quadrature quad{1e-10, 1e-13, 1e-12, 20000};
    const double mean_los_area =
        2.0 * kPi *
        integrate_upper([&](double r) { return std::exp(-r / c) * r; }, 0.0, c, quad, "oracle");
    CHECK(kPi * r_b * r_b == doctest::Approx(mean_los_area).epsilon(1e-6));
    CHECK(r_b == doctest::Approx(std::sqrt(2.0) * c).epsilon(1e-9));

    BuildingStats degenerate;  // no blockage, no finite LOS ball
    CHECK_THROWS_AS(los_ball_radius(degenerate), std::domain_error);
}

namespace {
EmpiricalTable self_generated(const LosModel& m, double lo, double hi, double step) {
    EmpiricalTable t;
    for (double d = lo; d <= hi; d += step) {
        t.distances_m.push_back(d);
        t.probs.push_back(p_los(m, d));
    }
    return t;
}
}  // namespace

TEST_CASE("3GPP urban fit recovers self-generated parameters") {
    const LosModel truth = ThreeGppUrban{18.0, 63.0};
    const auto fit = fit_3gpp_urban(self_generated(truth, 5.0, 500.0, 5.0));
    CHECK(fit.model.a_m == doctest::Approx(18.0).epsilon(0.01));
    CHECK(fit.model.b_m == doctest::Approx(63.0).epsilon(0.01));
    CHECK(fit.rmse_percent < 0.1);
    CHECK(fit.converged);

    // Idempotence: refitting data generated from the fit reproduces it.
    const auto refit =
        fit_3gpp_urban(self_generated(LosModel{fit.model}, 5.0, 500.0, 5.0));
    CHECK(refit.model.a_m == doctest::Approx(fit.model.a_m).epsilon(1e-3));
    CHECK(refit.model.b_m == doctest::Approx(fit.model.b_m).epsilon(1e-3));
}

TEST_CASE("3GPP urban fit rejects undersized tables") {
    EmpiricalTable small;
    small.distances_m = {10.0, 300.0};
    small.probs = {0.9, 0.1};
    CHECK_THROWS_AS(fit_3gpp_urban(small), std::invalid_argument);
    const auto narrow = self_generated(LosModel{ThreeGppUrban{}}, 50.0, 200.0, 10.0);
    CHECK_THROWS_AS(fit_3gpp_urban(narrow), std::invalid_argument);
}

TEST_CASE("suburban fit recovers the decay distance") {
    const auto table = self_generated(LosModel{SuburbanExp{150.0}}, 5.0, 600.0, 10.0);
    const auto fit = fit_suburban_exp(table);
    CHECK(fit.model.c_m == doctest::Approx(150.0).epsilon(1e-3));
    CHECK(fit.rmse_percent < 0.01);
}

TEST_CASE("model validation catches bad parameters") {
    CHECK_THROWS_AS(validate(LosModel{ThreeGppUrban{-1.0, 63.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(LosModel{SuburbanExp{0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(validate(LosModel{GeneralizedLosBall{200.0, 1.5}}), std::invalid_argument);
    EmpiricalTable bad;
    bad.distances_m = {10.0, 10.0};
    bad.probs = {0.5, 0.4};
    CHECK_THROWS_AS(validate(LosModel{bad}), std::invalid_argument);
}
