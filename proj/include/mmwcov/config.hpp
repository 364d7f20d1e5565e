/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MMWCOV_CONFIG_HPP
#define MMWCOV_CONFIG_HPP

#include <string>

#include <json.hpp>

#include "mmwcov/montecarlo.hpp"
#include "mmwcov/quadrature.hpp"

namespace mmwcov::config {

/// Parsed scenario: simulator config (which embeds the network config),
/// quadrature tolerances and the canonical resolved snapshot.
struct Scenario {
    montecarlo::SimConfig sim;
    Quadrature quad;
    std::string buildings_path;  // empty for statistical blocking
};

/// Parse a strict-schema JSON config. Unknown keys are rejected with the
/// full field path. Relative building paths resolve against base_dir.
Scenario from_json(const nlohmann::json& doc, const std::string& base_dir = ".");
Scenario load_file(const std::string& path);

/// Canonical resolved snapshot: explicit intercepts, explicit antenna
/// patterns, resolved noise and radius. The output is itself a valid config.
nlohmann::json to_json(const Scenario& scenario);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string fingerprint(const nlohmann::json& resolved);

nlohmann::json los_model_to_json(const blockage::LosModel& model);
blockage::LosModel los_model_from_json(const nlohmann::json& node, const std::string& path);

}  // namespace mmwcov::config

#endif  // MMWCOV_CONFIG_HPP
