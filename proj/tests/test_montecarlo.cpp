/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "mmwcov/common.hpp"
#include "mmwcov/montecarlo.hpp"
#include "test_support.hpp"

using namespace mmwcov;
using namespace mmwcov::montecarlo;
using mmwcov::testsupport::baseline_28ghz;

namespace {
SimConfig light_sim(std::uint64_t seed = 1) {
    SimConfig sim;
    sim.network = baseline_28ghz();
    sim.network.bs_density = 30.0 / 1e6;
    sim.seed = seed;
    return sim;
}
}  // namespace

TEST_CASE("snapshots are a pure function of (config, seed, index)") {
    const SimConfig sim = light_sim(99);
    const Snapshot a = sample_snapshot(sim, 17);
    const Snapshot b = sample_snapshot(sim, 17);
    CHECK(a.sinr == b.sinr);
    CHECK(a.inr == b.inr);
    CHECK(a.serving.distance == b.serving.distance);
    REQUIRE(a.interferers.size() == b.interferers.size());
    for (std::size_t i = 0; i < a.interferers.size(); ++i) {
        CHECK(a.interferers[i].path_gain == b.interferers[i].path_gain);
        CHECK(a.interferers[i].fading == b.interferers[i].fading);
    }
    const Snapshot c = sample_snapshot(sim, 18);
    CHECK(a.sinr != c.sinr);
}

TEST_CASE("stored SINR is reproducible from snapshot fields") {
    const SimConfig sim = light_sim(5);
    for (const std::uint64_t idx : {0, 3, 11, 42}) {
        const Snapshot s = sample_snapshot(sim, idx);
        double interference = 0.0;
        for (const auto& l : s.interferers) interference += l.fading * l.gain * l.path_gain;
        const double signal = s.serving.fading * s.serving.gain * s.serving.path_gain;
        CHECK(s.sinr == signal / (sim.network.noise_power + interference));
        CHECK(s.inr == interference / sim.network.noise_power);
        // serving link must carry the aligned-beam gain and win on path loss
        CHECK(s.serving.gain ==
              sim.network.bs_pattern.main_gain * sim.network.ms_pattern.main_gain);
        for (const auto& l : s.interferers) CHECK(l.path_gain <= s.serving.path_gain);
    }
}

TEST_CASE("empirical CCDF is thread-count invariant") {
    SimConfig sim = light_sim(7);
    sim.snapshots = 4000;
    std::vector<double> grid;
    for (double t = -10.0; t <= 30.0; t += 5.0) grid.push_back(t);
    sim.threads = 1;
    const CoverageCurve one = empirical_ccdf(sim, CurveKind::sinr, grid);
    sim.threads = 7;
    const CoverageCurve many = empirical_ccdf(sim, CurveKind::sinr, grid);
    REQUIRE(one.points.size() == many.points.size());
    for (std::size_t i = 0; i < one.points.size(); ++i)
        CHECK(one.points[i].probability == many.points[i].probability);
}

TEST_CASE("serving distance follows the nearest-neighbor law under full LOS") {
    SimConfig sim = light_sim(123);
    sim.network.los_model = blockage::LosBall{1e9};
    const long n = 100000;
    std::vector<double> dist;
    dist.reserve(n);
    for (long i = 0; i < n; ++i) dist.push_back(sample_snapshot(sim, i).serving.distance);
    std::sort(dist.begin(), dist.end());
    const double lam = sim.network.bs_density;
    double ks = 0.0;
    for (long i = 0; i < n; ++i) {
        const double cdf = 1.0 - std::exp(-kPi * lam * dist[i] * dist[i]);
        ks = std::max(ks, std::abs(cdf - (i + 0.5) / n));
    }
    CHECK(ks < 0.01);
}

TEST_CASE("SNR dominates SINR on the same snapshot set") {
    SimConfig sim = light_sim(3);
    sim.snapshots = 5000;
    std::vector<double> grid;
    for (double t = -20.0; t <= 40.0; t += 4.0) grid.push_back(t);
    const CoverageCurve snr = empirical_ccdf(sim, CurveKind::snr, grid);
    const CoverageCurve sinr = empirical_ccdf(sim, CurveKind::sinr, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(snr.points[i].probability >= sinr.points[i].probability);
}

TEST_CASE("doubling the simulation radius is within the confidence band") {
    SimConfig sim;
    sim.network = baseline_28ghz();
    sim.network.fading = {1, 1};
    sim.snapshots = 20000;
    sim.seed = 31;
    const CoverageCurve base = empirical_ccdf(sim, CurveKind::sinr, {10.0});
    SimConfig wide = sim;
    wide.sim_radius_m = 2.0 * effective_sim_radius(sim);
    const CoverageCurve far = empirical_ccdf(wide, CurveKind::sinr, {10.0});
    const double gap = std::abs(base.points[0].probability - far.points[0].probability);
    CHECK(gap < base.points[0].ci99_halfwidth.value());
}

TEST_CASE("degenerate network reduces to the nearest-BS SNR") {
    SimConfig sim;
    sim.network = baseline_28ghz();
    sim.network.bs_density = 300.0 / 1e6;
    sim.network.los_model = blockage::LosBall{1e9};       // always LOS
    sim.network.fading = {1000000, 1000000};              // fading pinned at 1
    sim.network.bs_pattern.side_gain = 1e-12;             // interferers silenced
    sim.network.bs_pattern.beamwidth = 1e-4;
    sim.network.ms_pattern.side_gain = 1e-12;
    sim.network.ms_pattern.beamwidth = 1e-4;
    sim.seed = 8;
    const double g0 = sim.network.bs_pattern.main_gain * sim.network.ms_pattern.main_gain;
    for (long i = 0; i < 200; ++i) {
        const Snapshot s = sample_snapshot(sim, i);
        const double expected = g0 *
                                propagation::path_loss(sim.network.pathloss, s.serving.distance,
                                                       propagation::LinkState::los) /
                                sim.network.noise_power;
        CHECK(s.sinr / expected == doctest::Approx(1.0).epsilon(0.02));
    }
}

TEST_CASE("interference vanishes in sparse networks") {
    SimConfig sim;
    sim.network = baseline_28ghz();
    sim.network.bs_density = 0.01 / 1e6;  // effectively isolated cells
    sim.snapshots = 2000;
    sim.seed = 4;
    const CoverageCurve inr = empirical_ccdf(sim, CurveKind::inr, {0.0});
    CHECK(inr.points[0].probability < 0.01);
}

TEST_CASE("empty-network draws are resampled and counted") {
    SimConfig sim = light_sim(2);
    // nothing to resample at healthy densities
    CHECK(sample_snapshot(sim, 0).resample_count == 0);
}

TEST_CASE("snapshot count precondition") {
    SimConfig sim = light_sim(1);
    sim.snapshots = 10;
    CHECK_THROWS_AS(empirical_ccdf(sim, CurveKind::sinr, {0.0}), std::invalid_argument);
}

TEST_CASE("radius floor is enforced") {
    SimConfig sim = light_sim(1);
    sim.sim_radius_m = 100.0;  // far fewer than 500 expected BSs
    CHECK_THROWS_AS(validate(sim), std::invalid_argument);
}

TEST_CASE("measured load matches the cell-size law") {
    const double lam = 50.0 / 1e6;
    const auto pmf = measure_load(lam, 10.0 * lam, 2000, 99);
    REQUIRE(pmf.size() > 2);
    CHECK(pmf[0] == 0.0);
    double mean = 0.0, total = 0.0;
    for (std::size_t n = 0; n < pmf.size(); ++n) {
        mean += static_cast<double>(n) * pmf[n];
        total += pmf[n];
    }
    CHECK(total == doctest::Approx(1.0));
    CHECK(mean == doctest::Approx(1.0 + 1.28 * 10.0).epsilon(0.05));

    // a nearly empty user process concentrates the load at one
    const auto lonely = measure_load(lam, 0.01 * lam, 600, 5);
    CHECK(lonely[1] > 0.95);
}

TEST_CASE("density sweep reports INR exceedance monotone in density") {
    SimConfig sim;
    sim.network = baseline_28ghz();
    sim.snapshots = 3000;
    sim.seed = 11;
    const std::vector<double> densities{20.0 / 1e6, 100.0 / 1e6, 500.0 / 1e6};
    const auto sweep = density_sweep(sim, densities, SweepMetric::inr_exceedance, 0.0);
    REQUIRE(sweep.size() == 3);
    CHECK(sweep[0].value < sweep[1].value);
    CHECK(sweep[1].value < sweep[2].value);
    for (const auto& p : sweep)
        CHECK(p.isd == doctest::Approx(2.0 / std::sqrt(kPi * p.density)));
}

TEST_CASE("denser blockage lowers the interference exceedance") {
    auto city = [](double los_fraction, std::uint64_t seed) {
        SimConfig sim;
        sim.network = baseline_28ghz();
        sim.network.bs_density = density_from_isd(100.0);
        sim.network.los_model = blockage::GeneralizedLosBall{200.0, los_fraction};
        sim.network.pathloss.alpha_nlos = 3.3;
        sim.network.bs_pattern = {db_to_linear(18.0), db_to_linear(-2.0), 10.0 * kPi / 180.0};
        sim.network.ms_pattern = {1.0, 1.0, 2.0 * kPi};
        sim.snapshots = 6000;
        sim.seed = seed;
        return empirical_ccdf(sim, CurveKind::inr, {0.0}).points[0].probability;
    };
    const double austin = city(0.3027, 19);  // lighter blockage
    const double la = city(0.2419, 19);      // denser blockage
    CHECK(la <= austin);
}

TEST_CASE("Monte Carlo rate CCDF agrees with the analytic mixture") {
    SimConfig sim;
    sim.network = baseline_28ghz();
    sim.snapshots = 20000;
    sim.seed = 21;
    const std::vector<double> taus{5e7};
    const CoverageCurve mc = empirical_ccdf(sim, CurveKind::rate, taus);
    const CoverageCurve an = analytic::rate_coverage(sim.network, taus);
    CHECK(std::abs(mc.points[0].probability - an.points[0].probability) < 0.03);
}

TEST_CASE("building footprints drive the LOS state in buildings mode") {
    SimConfig sim;
    sim.network = baseline_28ghz();
    sim.network.bs_density = 30.0 / 1e6;
    sim.buildings = std::make_shared<const geodata::BuildingSet>(
        geodata::boolean_rectangle_field({0, 0, 2000, 2000}, 1.5e-4, 30.0, 15.0, 17));
    sim.seed = 44;
    long los = 0;
    const long n = 300;
    for (long i = 0; i < n; ++i) {
        const Snapshot s = sample_snapshot(sim, i);
        CHECK(s.sinr > 0.0);
        CHECK(s.serving.distance >= 1.0);
        los += s.serving.los ? 1 : 0;
    }
    CHECK(los > 0);        // some links see through gaps
    CHECK(los < n);        // and some are blocked

    // deterministic like the statistical mode
    CHECK(sample_snapshot(sim, 5).sinr == sample_snapshot(sim, 5).sinr);

    // measured-cells load is incompatible with footprint blocking
    sim.rate_load = RateLoadMode::measured_cells;
    CHECK_THROWS_AS(validate(sim), std::invalid_argument);
}

TEST_CASE("measured-cells load agrees with the cell-size PMF mode") {
    SimConfig sim;
    sim.network = baseline_28ghz();
    sim.network.bs_density = 30.0 / 1e6;
    sim.network.user_density = 300.0 / 1e6;
    sim.snapshots = 2000;
    sim.seed = 13;
    const std::vector<double> taus{2e7};
    const CoverageCurve pmf_mode = empirical_ccdf(sim, CurveKind::rate, taus);
    sim.rate_load = RateLoadMode::measured_cells;
    const CoverageCurve measured = empirical_ccdf(sim, CurveKind::rate, taus);
    CHECK(std::abs(pmf_mode.points[0].probability - measured.points[0].probability) < 0.06);
}

TEST_CASE("snapshot dump emits one JSON object per line") {
    SimConfig sim = light_sim(6);
    const std::string dump = dump_snapshots(sim, 3);
    CHECK(std::count(dump.begin(), dump.end(), '\n') == 3);
    CHECK(dump.find("\"sinr\"") != std::string::npos);
    CHECK(dump.find("\"serving\"") != std::string::npos);
}
