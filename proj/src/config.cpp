/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "mmwcov/config.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>

#include "mmwcov/common.hpp"

namespace mmwcov::config {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(path + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items())
        if (!ok.count(key)) throw ConfigError(path + "." + key + ": unknown key");
}

const json* find(const json& obj, const std::string& key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const std::string& path, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) throw ConfigError(path + "." + key + ": missing");
    if (!v->is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return v->get<double>();
}

double get_number_or(const json& obj, const std::string& path, const std::string& key,
                     double fallback) {
    const json* v = find(obj, key);
    if (!v) return fallback;
    if (!v->is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return v->get<double>();
}

std::string get_string(const json& obj, const std::string& path, const std::string& key) {
    const json* v = find(obj, key);
    if (!v) throw ConfigError(path + "." + key + ": missing");
    if (!v->is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return v->get<std::string>();
}

std::vector<double> get_number_array(const json& node, const std::string& path) {
    if (!node.is_array()) throw ConfigError(path + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : node) {
        if (!v.is_number()) throw ConfigError(path + ": expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

propagation::AntennaPattern parse_pattern(const json& node, const std::string& path) {
    const bool explicit_form = find(node, "gain_db") != nullptr;
    const bool ula_form = find(node, "ula_antennas") != nullptr;
    if (explicit_form == ula_form)
        throw ConfigError(path +
                          ": give either gain_db/side_db/beamwidth_deg or "
                          "ula_antennas/ula_spacing_wavelengths");
    propagation::AntennaPattern p;
    if (explicit_form) {
        check_keys(node, path, {"gain_db", "side_db", "beamwidth_deg"});
        p.main_gain = db_to_linear(get_number(node, path, "gain_db"));
        p.side_gain = db_to_linear(get_number(node, path, "side_db"));
        p.beamwidth = get_number(node, path, "beamwidth_deg") * kPi / 180.0;
    } else {
        check_keys(node, path, {"ula_antennas", "ula_spacing_wavelengths"});
        const double n = get_number(node, path, "ula_antennas");
        if (n < 2.0 || n != std::floor(n))
            throw ConfigError(path + ".ula_antennas: expected an integer >= 2");
        p = propagation::sectored_fit(static_cast<int>(n),
                                      get_number_or(node, path, "ula_spacing_wavelengths", 0.5));
    }
    try {
        propagation::validate(p);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return p;
}

json pattern_to_json(const propagation::AntennaPattern& p) {
    return json{{"gain_db", linear_to_db(p.main_gain)},
                {"side_db", linear_to_db(p.side_gain)},
                {"beamwidth_deg", p.beamwidth * 180.0 / kPi}};
}

}  // namespace

blockage::LosModel los_model_from_json(const json& node, const std::string& path) {
    const std::string kind = get_string(node, path, "model");
    blockage::LosModel model;
    if (kind == "three_gpp_urban") {
        check_keys(node, path, {"model", "a_m", "b_m"});
        model = blockage::ThreeGppUrban{get_number(node, path, "a_m"),
                                        get_number(node, path, "b_m")};
    } else if (kind == "suburban_exp") {
        check_keys(node, path, {"model", "c_m"});
        model = blockage::SuburbanExp{get_number(node, path, "c_m")};
    } else if (kind == "los_ball") {
        check_keys(node, path, {"model", "radius_m"});
        model = blockage::LosBall{get_number(node, path, "radius_m")};
    } else if (kind == "generalized_los_ball") {
        check_keys(node, path, {"model", "radius_m", "los_fraction"});
        model = blockage::GeneralizedLosBall{get_number(node, path, "radius_m"),
                                             get_number(node, path, "los_fraction")};
    } else if (kind == "empirical_table") {
        check_keys(node, path, {"model", "distances_m", "probs"});
        blockage::EmpiricalTable t;
        t.distances_m = get_number_array(node.at("distances_m"), path + ".distances_m");
        t.probs = get_number_array(node.at("probs"), path + ".probs");
        model = std::move(t);
    } else {
        throw ConfigError(path + ".model: unknown blockage model '" + kind + "'");
    }
    try {
        blockage::validate(model);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return model;
}

json los_model_to_json(const blockage::LosModel& model) {
    return std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, blockage::ThreeGppUrban>)
                return {{"model", "three_gpp_urban"}, {"a_m", m.a_m}, {"b_m", m.b_m}};
            else if constexpr (std::is_same_v<T, blockage::SuburbanExp>)
                return {{"model", "suburban_exp"}, {"c_m", m.c_m}};
            else if constexpr (std::is_same_v<T, blockage::LosBall>)
                return {{"model", "los_ball"}, {"radius_m", m.radius_m}};
            else if constexpr (std::is_same_v<T, blockage::GeneralizedLosBall>)
                return {{"model", "generalized_los_ball"},
                        {"radius_m", m.radius_m},
                        {"los_fraction", m.los_fraction}};
            else
                return {{"model", "empirical_table"},
                        {"distances_m", m.distances_m},
                        {"probs", m.probs}};
        },
        model);
}

Scenario from_json(const json& doc, const std::string& base_dir) {
    check_keys(doc, "config", {"network", "sim", "quad"});
    const json* net_node = find(doc, "network");
    if (!net_node) throw ConfigError("config.network: missing");

    Scenario sc;
    auto& net = sc.sim.network;

    check_keys(*net_node, "network",
               {"bs_density_per_km2", "user_density_per_km2", "blockage", "pathloss", "antenna",
                "fading", "bandwidth_mhz", "noise"});
    net.bs_density = get_number(*net_node, "network", "bs_density_per_km2") / 1e6;
    net.user_density = get_number(*net_node, "network", "user_density_per_km2") / 1e6;
    net.bandwidth_hz = get_number(*net_node, "network", "bandwidth_mhz") * 1e6;

    const json* blk = find(*net_node, "blockage");
    if (!blk) throw ConfigError("network.blockage: missing");
    net.los_model = los_model_from_json(*blk, "network.blockage");

    const json* pl = find(*net_node, "pathloss");
    if (!pl) throw ConfigError("network.pathloss: missing");
    check_keys(*pl, "network.pathloss",
               {"alpha_los", "alpha_nlos", "intercept_mode", "carrier_ghz", "c_los_db",
                "c_nlos_db"});
    net.pathloss.alpha_los = get_number(*pl, "network.pathloss", "alpha_los");
    net.pathloss.alpha_nlos = get_number(*pl, "network.pathloss", "alpha_nlos");
    const std::string mode = get_string(*pl, "network.pathloss", "intercept_mode");
    if (mode == "friis_1m") {
        const double carrier = get_number(*pl, "network.pathloss", "carrier_ghz") * 1e9;
        net.pathloss.c_los = net.pathloss.c_nlos = friis_intercept_1m(carrier);
    } else if (mode == "explicit") {
        net.pathloss.c_los = db_to_linear(get_number(*pl, "network.pathloss", "c_los_db"));
        net.pathloss.c_nlos = db_to_linear(get_number(*pl, "network.pathloss", "c_nlos_db"));
    } else {
        throw ConfigError("network.pathloss.intercept_mode: expected friis_1m or explicit");
    }

    const json* ant = find(*net_node, "antenna");
    if (!ant) throw ConfigError("network.antenna: missing");
    check_keys(*ant, "network.antenna", {"bs", "ms"});
    const json* bs = find(*ant, "bs");
    const json* ms = find(*ant, "ms");
    if (!bs || !ms) throw ConfigError("network.antenna: needs bs and ms patterns");
    net.bs_pattern = parse_pattern(*bs, "network.antenna.bs");
    net.ms_pattern = parse_pattern(*ms, "network.antenna.ms");

    const json* fading = find(*net_node, "fading");
    if (!fading) throw ConfigError("network.fading: missing");
    check_keys(*fading, "network.fading", {"nu_los", "nu_nlos"});
    net.fading.nu_los = static_cast<int>(get_number(*fading, "network.fading", "nu_los"));
    net.fading.nu_nlos = static_cast<int>(get_number(*fading, "network.fading", "nu_nlos"));

    const json* noise = find(*net_node, "noise");
    if (!noise) throw ConfigError("network.noise: missing");
    if (find(*noise, "normalized_db")) {
        check_keys(*noise, "network.noise", {"normalized_db"});
        net.noise_power = db_to_linear(get_number(*noise, "network.noise", "normalized_db"));
    } else {
        check_keys(*noise, "network.noise", {"figure_db", "tx_power_dbm"});
        const double noise_dbm = kThermalNoiseDbmHz + 10.0 * std::log10(net.bandwidth_hz) +
                                 get_number(*noise, "network.noise", "figure_db");
        net.noise_power =
            db_to_linear(noise_dbm - get_number(*noise, "network.noise", "tx_power_dbm"));
    }

    if (const json* sim = find(doc, "sim")) {
        check_keys(*sim, "sim",
                   {"radius_m", "snapshots", "seed", "threads", "shadowing", "blocking_source",
                    "rate_load"});
        sc.sim.sim_radius_m = get_number_or(*sim, "sim", "radius_m", 0.0);
        sc.sim.snapshots = static_cast<long>(get_number_or(*sim, "sim", "snapshots", 10000));
        sc.sim.seed = static_cast<std::uint64_t>(get_number_or(*sim, "sim", "seed", 1));
        sc.sim.threads = static_cast<int>(get_number_or(*sim, "sim", "threads", 0));
        if (const json* sh = find(*sim, "shadowing")) {
            check_keys(*sh, "sim.shadowing", {"sigma_los_db", "sigma_nlos_db"});
            sc.sim.shadowing = montecarlo::Shadowing{
                get_number(*sh, "sim.shadowing", "sigma_los_db"),
                get_number(*sh, "sim.shadowing", "sigma_nlos_db")};
        }
        if (const json* src = find(*sim, "blocking_source")) {
            if (src->is_string()) {
                if (src->get<std::string>() != "statistical")
                    throw ConfigError(
                        "sim.blocking_source: expected \"statistical\" or {\"buildings\": path}");
            } else {
                check_keys(*src, "sim.blocking_source", {"buildings"});
                std::filesystem::path p =
                    get_string(*src, "sim.blocking_source", "buildings");
                if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
                sc.buildings_path = p.string();
                sc.sim.buildings = std::make_shared<const geodata::BuildingSet>(
                    geodata::BuildingSet::load(sc.buildings_path));
            }
        }
        if (const json* rl = find(*sim, "rate_load")) {
            if (!rl->is_string()) throw ConfigError("sim.rate_load: expected a string");
            const std::string v = rl->get<std::string>();
            if (v == "pmf")
                sc.sim.rate_load = montecarlo::RateLoadMode::pmf;
            else if (v == "measured-cells")
                sc.sim.rate_load = montecarlo::RateLoadMode::measured_cells;
            else
                throw ConfigError("sim.rate_load: expected pmf or measured-cells");
        }
    }

    if (const json* quad = find(doc, "quad")) {
        check_keys(*quad, "quad", {"rel_tol", "abs_tol", "tail_cutoff"});
        sc.quad.rel_tol = get_number_or(*quad, "quad", "rel_tol", sc.quad.rel_tol);
        sc.quad.abs_tol = get_number_or(*quad, "quad", "abs_tol", sc.quad.abs_tol);
        sc.quad.tail_cutoff = get_number_or(*quad, "quad", "tail_cutoff", sc.quad.tail_cutoff);
        if (!(sc.quad.rel_tol > 0.0 && sc.quad.abs_tol > 0.0 && sc.quad.tail_cutoff > 0.0))
            throw ConfigError("quad: tolerances must be > 0");
    }

    try {
        montecarlo::validate(sc.sim);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return sc;
}

Scenario load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    json doc;
    try {
        doc = json::parse(f);
    } catch (const json::exception& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return from_json(doc, std::filesystem::path(path).parent_path().string());
}

json to_json(const Scenario& sc) {
    const auto& net = sc.sim.network;
    json doc;
    doc["network"] = {
        {"bs_density_per_km2", net.bs_density * 1e6},
        {"user_density_per_km2", net.user_density * 1e6},
        {"blockage", los_model_to_json(net.los_model)},
        {"pathloss",
         {{"alpha_los", net.pathloss.alpha_los},
          {"alpha_nlos", net.pathloss.alpha_nlos},
          {"intercept_mode", "explicit"},
          {"c_los_db", linear_to_db(net.pathloss.c_los)},
          {"c_nlos_db", linear_to_db(net.pathloss.c_nlos)}}},
        {"antenna", {{"bs", pattern_to_json(net.bs_pattern)}, {"ms", pattern_to_json(net.ms_pattern)}}},
        {"fading", {{"nu_los", net.fading.nu_los}, {"nu_nlos", net.fading.nu_nlos}}},
        {"bandwidth_mhz", net.bandwidth_hz / 1e6},
        {"noise", {{"normalized_db", linear_to_db(net.noise_power)}}},
    };
    json sim;
    sim["radius_m"] = sc.sim.buildings ? 0.0 : montecarlo::effective_sim_radius(sc.sim);
    sim["snapshots"] = sc.sim.snapshots;
    sim["seed"] = sc.sim.seed;
    if (sc.sim.shadowing)
        sim["shadowing"] = {{"sigma_los_db", sc.sim.shadowing->sigma_los_db},
                            {"sigma_nlos_db", sc.sim.shadowing->sigma_nlos_db}};
    if (!sc.buildings_path.empty())
        sim["blocking_source"] = {{"buildings", sc.buildings_path}};
    else
        sim["blocking_source"] = "statistical";
    sim["rate_load"] =
        sc.sim.rate_load == montecarlo::RateLoadMode::pmf ? "pmf" : "measured-cells";
    doc["sim"] = std::move(sim);
    doc["quad"] = {{"rel_tol", sc.quad.rel_tol},
                   {"abs_tol", sc.quad.abs_tol},
                   {"tail_cutoff", sc.quad.tail_cutoff}};
    return doc;
}

std::string fingerprint(const json& resolved) {
    const std::string s = resolved.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace mmwcov::config
