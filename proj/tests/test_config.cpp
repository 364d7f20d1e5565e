/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mmwcov/common.hpp"
#include "mmwcov/config.hpp"

using namespace mmwcov;
using nlohmann::json;

namespace {

json minimal_config() {
    return json::parse(R"({
      "network": {
        "bs_density_per_km2": 100.0,
        "user_density_per_km2": 1000.0,
        "blockage": { "model": "los_ball", "radius_m": 200.0 },
        "pathloss": { "alpha_los": 2.0, "alpha_nlos": 4.0,
                      "intercept_mode": "friis_1m", "carrier_ghz": 28.0 },
        "antenna": {
          "bs": { "gain_db": 20.0, "side_db": -10.0, "beamwidth_deg": 10.0 },
          "ms": { "gain_db": 10.0, "side_db": -10.0, "beamwidth_deg": 45.0 }
        },
        "fading": { "nu_los": 3, "nu_nlos": 2 },
        "bandwidth_mhz": 200.0,
        "noise": { "figure_db": 10.0, "tx_power_dbm": 30.0 }
      }
    })");
}

}  // namespace

TEST_CASE("noise resolution from figure and transmit power") {
    const auto sc = config::from_json(minimal_config());
    // -174 dBm/Hz + 10 log10(200 MHz) + 10 dB NF, normalized by 30 dBm
    const double expected_db = -174.0 + 10.0 * std::log10(200e6) + 10.0 - 30.0;
    CHECK(linear_to_db(sc.sim.network.noise_power) == doctest::Approx(expected_db).epsilon(1e-9));

    auto doc = minimal_config();
    doc["network"]["noise"] = {{"normalized_db", expected_db}};
    const auto sc2 = config::from_json(doc);
    CHECK(sc2.sim.network.noise_power ==
          doctest::Approx(sc.sim.network.noise_power).epsilon(1e-12));
}

TEST_CASE("friis intercepts land on both path loss branches") {
    const auto sc = config::from_json(minimal_config());
    CHECK(sc.sim.network.pathloss.c_los == doctest::Approx(friis_intercept_1m(28e9)));
    CHECK(sc.sim.network.pathloss.c_los == sc.sim.network.pathloss.c_nlos);
}

TEST_CASE("unknown keys are rejected with their full path") {
    auto doc = minimal_config();
    doc["network"]["pathloss"]["alpha"] = 3.0;
    try {
        config::from_json(doc);
        FAIL("expected rejection");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("network.pathloss.alpha") != std::string::npos);
    }
}

TEST_CASE("blockage models serialize and parse round trip") {
    const std::vector<blockage::LosModel> models = {
        blockage::ThreeGppUrban{18.0, 63.0}, blockage::SuburbanExp{85.0},
        blockage::LosBall{200.0}, blockage::GeneralizedLosBall{200.0, 0.3027},
        blockage::EmpiricalTable{{10.0, 50.0, 100.0}, {0.9, 0.5, 0.2}}};
    for (const auto& m : models) {
        const json j = config::los_model_to_json(m);
        const auto back = config::los_model_from_json(j, "blockage");
        for (double d = 0.0; d < 400.0; d += 17.0)
            CHECK(blockage::p_los(back, d) == blockage::p_los(m, d));
    }
}

TEST_CASE("ULA antenna specs resolve to explicit sectored patterns") {
    auto doc = minimal_config();
    doc["network"]["antenna"]["bs"] = {{"ula_antennas", 32},
                                       {"ula_spacing_wavelengths", 0.5}};
    const auto sc = config::from_json(doc);
    CHECK(sc.sim.network.bs_pattern.main_gain == doctest::Approx(32.0));
    CHECK(sc.sim.network.bs_pattern.beamwidth < 0.1);
    // the resolved snapshot is itself a loadable config
    const auto resolved = config::to_json(sc);
    const auto again = config::from_json(resolved);
    CHECK(again.sim.network.bs_pattern.main_gain ==
          doctest::Approx(sc.sim.network.bs_pattern.main_gain));
}

TEST_CASE("fingerprints track content, not formatting") {
    const auto a = config::from_json(minimal_config());
    auto doc = minimal_config();
    const auto b = config::from_json(doc);
    CHECK(config::fingerprint(config::to_json(a)) == config::fingerprint(config::to_json(b)));
    doc["network"]["bs_density_per_km2"] = 101.0;
    const auto c = config::from_json(doc);
    CHECK(config::fingerprint(config::to_json(a)) != config::fingerprint(config::to_json(c)));
    CHECK(config::fingerprint(config::to_json(a)).size() == 16);
}

TEST_CASE("buildings blocking source loads the footprint file") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "mmwcov_config_test";
    fs::create_directories(dir);
    const std::string field = (dir / "square.json").string();
    {
        std::ofstream f(field);
        f << R"({"region": [[0,0],[1000,1000]],
                 "buildings": [[[100,100],[200,100],[200,200],[100,200]]]})";
    }
    auto doc = minimal_config();
    doc["sim"] = {{"blocking_source", {{"buildings", "square.json"}}}};
    const auto sc = config::from_json(doc, dir.string());
    REQUIRE(sc.sim.buildings != nullptr);
    CHECK(sc.sim.buildings->polygons().size() == 1);
    CHECK(sc.buildings_path.find("square.json") != std::string::npos);
}

TEST_CASE("quadrature tolerances must stay positive") {
    auto doc = minimal_config();
    doc["quad"] = {{"rel_tol", 0.0}};
    CHECK_THROWS_AS(config::from_json(doc), ConfigError);
}
