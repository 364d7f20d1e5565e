/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "mmwcov/analytic.hpp"
#include "mmwcov/common.hpp"
#include "mmwcov/montecarlo.hpp"
#include "mmwcov/quadrature.hpp"
#include "test_support.hpp"

using namespace mmwcov;
using namespace mmwcov::analytic;
using mmwcov::testsupport::baseline_28ghz;

TEST_CASE("association degenerates correctly with trivial blocking") {
    NetworkConfig cfg = baseline_28ghz();
    cfg.los_model = blockage::LosBall{1e9};  // effectively always LOS
    const auto all_los = association(cfg);
    CHECK(all_los.a_los == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(all_los.a_nlos == doctest::Approx(0.0).epsilon(1e-9));
    // nearest-neighbor law for the serving distance
    const double lam = cfg.bs_density;
    for (const double x : {20.0, 50.0, 100.0, 200.0}) {
        const double rayleigh = 2.0 * kPi * lam * x * std::exp(-kPi * lam * x * x);
        CHECK(all_los.pdf_los(x) == doctest::Approx(rayleigh).epsilon(1e-9));
    }

    cfg.los_model = blockage::GeneralizedLosBall{200.0, 0.0};  // never LOS
    const auto none = association(cfg);
    CHECK(none.a_los == doctest::Approx(0.0));
    CHECK(none.a_nlos == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("association probabilities sum to one and densities normalize") {
    NetworkConfig cfg = baseline_28ghz();
    const Quadrature quad;
    const auto assoc = association(cfg, quad);
    CHECK(assoc.a_los + assoc.a_nlos == doctest::Approx(1.0).epsilon(1e-6));
    const double int_los =
        integrate_upper([&](double x) { return assoc.pdf_los(x); }, 0.0, 100.0, quad, "t");
    const double int_nlos =
        integrate_upper([&](double x) { return assoc.pdf_nlos(x); }, 0.0, 100.0, quad, "t");
    CHECK(int_los == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(int_nlos == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("association matches the Monte Carlo oracle") {
    montecarlo::SimConfig sim;
    sim.network = baseline_28ghz();
    sim.network.bs_density = 30.0 / 1e6;  // lighter network keeps this quick
    sim.seed = 424242;
    const long n = 30000;
    long los_count = 0;
    for (long i = 0; i < n; ++i)
        if (montecarlo::sample_snapshot(sim, i).serving.los) ++los_count;
    const double empirical = static_cast<double>(los_count) / n;
    const auto assoc = association(sim.network);
    CHECK(std::abs(assoc.a_los - empirical) < 0.01);
}

TEST_CASE("cell load PMF") {
    // ratio -> 0: a lone user occupies its cell
    CHECK(load_pmf(1e-12, CellKind::serving, 1) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(load_pmf(1e-12, CellKind::serving, 0) == 0.0);

    const double ratio = 10.0;
    double sum_serving = 0.0, mean_serving = 0.0;
    for (int n = 1; n <= 2000; ++n) {
        const double p = load_pmf(ratio, CellKind::serving, n);
        sum_serving += p;
        mean_serving += n * p;
    }
    CHECK(sum_serving == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(mean_serving == doctest::Approx(1.0 + 1.28 * ratio).epsilon(0.01));

    double sum_typ = 0.0, mean_typ = 0.0;
    for (int n = 0; n <= 500; ++n) {
        const double p = load_pmf(ratio, CellKind::typical, n);
        sum_typ += p;
        mean_typ += n * p;
    }
    CHECK(sum_typ == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(mean_typ == doctest::Approx(ratio).epsilon(0.01));

    CHECK_THROWS_AS(load_pmf(0.0, CellKind::serving, 1), std::domain_error);
    CHECK_THROWS_AS(load_pmf(1.0, CellKind::serving, -1), std::domain_error);
}

TEST_CASE("SINR coverage limits") {
    NetworkConfig cfg = baseline_28ghz();

    SUBCASE("overwhelming noise sends coverage to zero") {
        cfg.noise_power = 1e12;
        const auto curve = sinr_coverage(cfg, {0.0});
        CHECK(curve.points[0].probability < 1e-6);
    }
    SUBCASE("very low threshold gives full coverage") {
        const auto curve = sinr_coverage(cfg, {-190.0});
        CHECK(curve.points[0].probability == doctest::Approx(1.0).epsilon(1e-4));
    }
    SUBCASE("curve is a valid CCDF") {
        std::vector<double> grid;
        for (double t = -20.0; t <= 40.0; t += 5.0) grid.push_back(t);
        const auto curve = sinr_coverage(cfg, grid);
        CHECK_NOTHROW(curve.check_invariants());
        CHECK(curve.points.front().probability > curve.points.back().probability);
    }
}

TEST_CASE("SNR dominates SINR and SIR equals zero-noise SINR") {
    NetworkConfig cfg = baseline_28ghz();
    std::vector<double> grid;
    for (double t = -10.0; t <= 30.0; t += 5.0) grid.push_back(t);
    const auto sinr = sinr_coverage(cfg, grid);
    const auto snr = snr_coverage(cfg, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(snr.points[i].probability >= sinr.points[i].probability - 1e-9);

    NetworkConfig noiseless = cfg;
    noiseless.noise_power = 0.0;
    const auto sir = sir_coverage(cfg, grid);
    const auto sinr0 = sinr_coverage(noiseless, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(sir.points[i].probability ==
              doctest::Approx(sinr0.points[i].probability).epsilon(1e-12));

    // noise can only hurt
    NetworkConfig noisier = cfg;
    noisier.noise_power = 2.0 * cfg.noise_power;
    const auto worse = sinr_coverage(noisier, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(worse.points[i].probability <= sinr.points[i].probability + 1e-9);
}

TEST_CASE("Rayleigh SNR coverage matches the Monte Carlo oracle") {
    montecarlo::SimConfig sim;
    sim.network = baseline_28ghz();
    sim.network.fading = {1, 1};
    sim.snapshots = 30000;
    sim.seed = 15;
    const std::vector<double> grid{0.0, 10.0, 20.0, 30.0, 40.0};
    const auto mc = montecarlo::empirical_ccdf(sim, CurveKind::snr, grid);
    const auto an = snr_coverage(sim.network, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(std::abs(an.points[i].probability - mc.points[i].probability) < 0.01);
}

TEST_CASE("SNR coverage is independent of the interference gain atoms") {
    NetworkConfig cfg = baseline_28ghz();
    NetworkConfig wider = cfg;
    wider.ms_pattern.beamwidth = 2.0;  // changes atom probabilities only
    const std::vector<double> grid{0.0, 10.0, 20.0};
    const auto a = snr_coverage(cfg, grid);
    // serving gain must stay fixed for this comparison
    wider.ms_pattern.main_gain = cfg.ms_pattern.main_gain;
    const auto b = snr_coverage(wider, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(a.points[i].probability == doctest::Approx(b.points[i].probability).epsilon(1e-12));
}

TEST_CASE("rate coverage basics") {
    NetworkConfig cfg = baseline_28ghz();
    const std::vector<double> taus{0.0, 1e7, 5e7, 1e8};
    const auto rate = rate_coverage(cfg, taus);
    CHECK(rate.points[0].probability == 1.0);  // tau = 0 exactly
    CHECK_NOTHROW(rate.check_invariants());

    // vanishing load reduces to the SINR curve at S(2^{tau/B} - 1)
    NetworkConfig lone = cfg;
    lone.user_density = cfg.bs_density * 1e-12;
    const auto r0 = rate_coverage(lone, {5e7});
    const double t_db = linear_to_db(std::exp2(5e7 / cfg.bandwidth_hz) - 1.0);
    const auto s = sinr_coverage(lone, {t_db});
    CHECK(std::abs(r0.points[0].probability - s.points[0].probability) < 1e-6);

    // more load, less rate
    NetworkConfig crowded = cfg;
    crowded.user_density = 2.0 * cfg.user_density;
    const auto busy = rate_coverage(crowded, taus);
    for (std::size_t i = 0; i < taus.size(); ++i)
        CHECK(busy.points[i].probability <= rate.points[i].probability + 1e-9);
}

TEST_CASE("mean load approximation tracks the full sum") {
    NetworkConfig cfg = baseline_28ghz();
    const std::vector<double> taus{0.0, 2e7, 5e7, 1e8};
    const auto approx = rate_coverage_mean_load(cfg, taus);
    CHECK(approx.points[0].probability == doctest::Approx(1.0));
    const auto full = rate_coverage(cfg, taus);
    for (std::size_t i = 0; i < taus.size(); ++i)
        CHECK(std::abs(approx.points[i].probability - full.points[i].probability) <= 0.1);

    NetworkConfig lone = cfg;
    lone.user_density = cfg.bs_density * 1e-12;
    const auto a = rate_coverage_mean_load(lone, {5e7});
    const auto b = rate_coverage(lone, {5e7});
    CHECK(a.points[0].probability == doctest::Approx(b.points[0].probability).epsilon(1e-9));
}

TEST_CASE("uplink interferer densities") {
    NetworkConfig cfg = baseline_28ghz();
    const auto at_zero = uplink_densities(cfg, 0.0);
    CHECK(at_zero.lambda_los == 0.0);
    CHECK(at_zero.lambda_nlos == 0.0);

    NetworkConfig blocked = cfg;
    blocked.los_model = blockage::GeneralizedLosBall{200.0, 0.0};
    CHECK(uplink_densities(blocked, 150.0).lambda_los == 0.0);

    // Q at r = 150 m against the Monte Carlo serving-path-loss oracle
    const double r = 150.0;
    const double q =
        uplink_densities(cfg, r).lambda_los / (cfg.bs_density * blockage::p_los(cfg.los_model, r));
    montecarlo::SimConfig sim;
    sim.network = cfg;
    sim.seed = 777;
    const long n = 20000;
    long hit = 0;
    const double cut = cfg.pathloss.c_los * std::pow(r, -cfg.pathloss.alpha_los);
    for (long i = 0; i < n; ++i)
        if (montecarlo::sample_snapshot(sim, i).serving.path_gain > cut) ++hit;
    CHECK(std::abs(q - static_cast<double>(hit) / n) < 0.01);
}

TEST_CASE("hetnet rate combination") {
    CoverageCurve mmw;
    mmw.kind = CurveKind::rate;
    mmw.points = {{0.0, 1.0, {}}, {1e7, 0.8, {}}, {5e7, 0.4, {}}};
    CoverageCurve uhf;
    uhf.kind = CurveKind::rate;
    uhf.points = {{0.0, 1.0, {}}, {1e7, 0.5, {}}, {5e7, 0.1, {}}};

    const auto all_mmw = hetnet_rate(1.0, mmw, uhf);
    for (std::size_t i = 0; i < mmw.points.size(); ++i)
        CHECK(all_mmw.points[i].probability == doctest::Approx(mmw.points[i].probability));

    const auto same = hetnet_rate(0.3, mmw, mmw);
    for (std::size_t i = 0; i < mmw.points.size(); ++i)
        CHECK(same.points[i].probability == doctest::Approx(mmw.points[i].probability));

    const double a = 0.7;
    const auto mix = hetnet_rate(a, mmw, uhf);
    for (std::size_t i = 0; i < mmw.points.size(); ++i) {
        const double expected =
            a * mmw.points[i].probability + (1.0 - a) * uhf.points[i].probability;
        CHECK(mix.points[i].probability == doctest::Approx(expected).epsilon(1e-12));
    }

    CHECK_THROWS_AS(hetnet_rate(1.5, mmw, uhf), std::invalid_argument);
}

TEST_CASE("analytic kernel rejects unsupported fading shapes") {
    NetworkConfig cfg = baseline_28ghz();
    cfg.fading.nu_los = 21;
    CHECK_THROWS_AS(sinr_coverage(cfg, {0.0}), std::invalid_argument);
}
