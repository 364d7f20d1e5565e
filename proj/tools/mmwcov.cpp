/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmwcov/analytic.hpp"
#include "mmwcov/common.hpp"
#include "mmwcov/config.hpp"
#include "mmwcov/curve.hpp"
#include "mmwcov/geodata.hpp"
#include "mmwcov/montecarlo.hpp"

namespace {

using mmwcov::ConfigError;
using mmwcov::CoverageCurve;
using mmwcov::CurveKind;
using mmwcov::NumericError;
namespace fs = std::filesystem;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCompareGap = 4;

struct CommonOpts {
    std::string config_path;
    std::string out;
    std::uint64_t seed = 0;  // 0 keeps the config seed
    long trials = 0;         // 0 keeps the config snapshot count
    int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_config = true) {
    auto* cfg = cmd->add_option("--config", o.config_path, "scenario config (JSON)");
    if (needs_config) cfg->required();
    cmd->add_option("--out", o.out, "output CSV path")->required();
    cmd->add_option("--seed", o.seed, "override the config seed");
    cmd->add_option("--trials", o.trials, "override the snapshot count");
    cmd->add_option("--threads", o.threads, "worker cap (results are thread-count invariant)");
}

mmwcov::config::Scenario load_scenario(const CommonOpts& o) {
    auto sc = mmwcov::config::load_file(o.config_path);
    if (o.seed != 0) sc.sim.seed = o.seed;
    if (o.trials != 0) sc.sim.snapshots = o.trials;
    if (o.threads != 0) sc.sim.threads = o.threads;
    return sc;
}

struct ThresholdOpts {
    double start_db = -20.0;
    double stop_db = 40.0;
    double step_db = 1.0;
    std::vector<double> explicit_db;
    std::vector<double> tau_mbps;
};

void add_threshold_flags(CLI::App* cmd, ThresholdOpts& t) {
    cmd->add_option("--start-db", t.start_db, "grid start (dB)");
    cmd->add_option("--stop-db", t.stop_db, "grid stop (dB)");
    cmd->add_option("--step-db", t.step_db, "grid step (dB)");
    cmd->add_option("--thresholds-db", t.explicit_db, "explicit dB thresholds")
        ->delimiter(',');
    cmd->add_option("--tau-mbps", t.tau_mbps, "rate thresholds in Mbps")->delimiter(',');
}

std::vector<double> db_grid(const ThresholdOpts& t) {
    if (!t.explicit_db.empty()) return t.explicit_db;
    if (!(t.step_db > 0.0)) throw ConfigError("--step-db must be > 0");
    std::vector<double> grid;
    for (double v = t.start_db; v <= t.stop_db + 1e-9; v += t.step_db) grid.push_back(v);
    return grid;
}

std::vector<double> tau_grid(const ThresholdOpts& t) {
    std::vector<double> taus = t.tau_mbps;
    if (taus.empty())
        for (double m = 0.0; m <= 200.0; m += 10.0) taus.push_back(m);
    for (auto& v : taus) v *= 1e6;
    return taus;
}

/// Writes <out>.manifest.json and returns its basename for the CSV header.
std::string write_manifest(const CommonOpts& o, const mmwcov::config::Scenario& sc,
                           const std::string& command, double duration_s,
                           const std::vector<std::string>& outputs) {
    const nlohmann::json resolved = mmwcov::config::to_json(sc);
    nlohmann::json m;
    m["tool"] = "mmwcov";
    m["version"] = mmwcov::kVersion;
    m["command"] = command;
    m["seed"] = sc.sim.seed;
    m["config"] = resolved;
    m["fingerprint"] = mmwcov::config::fingerprint(resolved);
    m["outputs"] = outputs;
    m["duration_seconds"] = duration_s;
    const std::string path = o.out + ".manifest.json";
    mmwcov::write_file(path, m.dump(2) + "\n");
    return fs::path(path).filename().string();
}

std::string command_line(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += ' ';
        s += argv[i];
    }
    return s;
}

void stamp_fingerprint(const mmwcov::config::Scenario& sc, CoverageCurve& curve) {
    curve.fingerprint = mmwcov::config::fingerprint(mmwcov::config::to_json(sc));
}

int run_analyze(const CommonOpts& o, const ThresholdOpts& t, const std::string& kind,
                const std::string& load_model, int n_max, const std::string& command) {
    const auto start = std::chrono::steady_clock::now();
    auto sc = load_scenario(o);
    CoverageCurve curve;
    if (kind == "rate") {
        const auto taus = tau_grid(t);
        curve = load_model == "mean"
                    ? mmwcov::analytic::rate_coverage_mean_load(sc.sim.network, taus, sc.quad,
                                                                sc.sim.threads)
                    : mmwcov::analytic::rate_coverage(sc.sim.network, taus, sc.quad, n_max,
                                                      sc.sim.threads);
    } else {
        const auto grid = db_grid(t);
        if (kind == "sinr")
            curve = mmwcov::analytic::sinr_coverage(sc.sim.network, grid, sc.quad,
                                                    sc.sim.threads);
        else if (kind == "snr")
            curve = mmwcov::analytic::snr_coverage(sc.sim.network, grid, sc.quad,
                                                   sc.sim.threads);
        else
            curve = mmwcov::analytic::sir_coverage(sc.sim.network, grid, sc.quad,
                                                   sc.sim.threads);
    }
    stamp_fingerprint(sc, curve);
    const double dur =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string manifest = write_manifest(o, sc, command, dur, {o.out});
    mmwcov::write_file(o.out, curve.to_csv(manifest));
    for (const auto& w : curve.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int run_simulate(const CommonOpts& o, const ThresholdOpts& t, const std::string& kind,
                 long dump_count, const std::string& dump_out, const std::string& command) {
    const auto start = std::chrono::steady_clock::now();
    auto sc = load_scenario(o);
    const CurveKind ck = mmwcov::curve_kind_from_name(kind);
    const std::vector<double> grid = ck == CurveKind::rate ? tau_grid(t) : db_grid(t);
    CoverageCurve curve = mmwcov::montecarlo::empirical_ccdf(sc.sim, ck, grid);
    stamp_fingerprint(sc, curve);

    std::vector<std::string> outputs{o.out};
    if (dump_count > 0) {
        const std::string path = dump_out.empty() ? o.out + ".snapshots.jsonl" : dump_out;
        mmwcov::write_file(path, mmwcov::montecarlo::dump_snapshots(sc.sim, dump_count));
        outputs.push_back(path);
    }
    const double dur =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string manifest = write_manifest(o, sc, command, dur, outputs);
    mmwcov::write_file(o.out, curve.to_csv(manifest));
    for (const auto& w : curve.warnings) std::cerr << "warning: " << w << "\n";
    return 0;
}

int run_fit(const std::string& buildings_path, const std::string& model, double radius,
            long pairs, double bin_width, double max_distance, long users, std::uint64_t seed,
            const std::string& out) {
    const auto set = mmwcov::geodata::BuildingSet::load(buildings_path);
    const auto stats = mmwcov::geodata::building_stats(set);

    nlohmann::json doc;
    doc["buildings"] = buildings_path;
    doc["stats"] = {{"buildings_per_km2", stats.density_per_m2 * 1e6},
                    {"mean_perimeter_m", stats.mean_perimeter_m},
                    {"mean_area_m2", stats.mean_area_m2},
                    {"covered_fraction", stats.covered_fraction}};

    mmwcov::Xoshiro256pp rng(seed, 0);
    const auto emp = mmwcov::geodata::empirical_p_los(set, pairs, bin_width, rng, max_distance);
    doc["empirical_p_los"] = {{"distances_m", emp.table.distances_m},
                              {"probs", emp.table.probs},
                              {"counts", emp.counts}};

    auto rms_against = [&](auto&& f) {
        double acc = 0.0;
        for (std::size_t i = 0; i < emp.table.distances_m.size(); ++i) {
            const double r = f(emp.table.distances_m[i]) - emp.table.probs[i];
            acc += r * r;
        }
        return 100.0 * std::sqrt(acc / emp.table.distances_m.size());
    };

    const bool all = model == "all";
    nlohmann::json fits;
    if (all || model == "3gpp") {
        try {
            const auto fit = mmwcov::blockage::fit_3gpp_urban(emp.table);
            fits["three_gpp_urban"] = {{"a_m", fit.model.a_m},
                                       {"b_m", fit.model.b_m},
                                       {"rmse_percent", fit.rmse_percent}};
        } catch (const std::exception& e) {
            if (!all) throw;
            fits["three_gpp_urban"] = {{"error", e.what()}};
        }
    }
    if (all || model == "rst") {
        try {
            if (stats.covered_fraction <= 0.0)
                throw std::domain_error(
                    "rst fit rejected: covered building fraction is 0 (empty footprint set)");
            const double c_perim =
                mmwcov::blockage::rst_c(stats, mmwcov::blockage::RstMethod::perimeter);
            const double c_area =
                mmwcov::blockage::rst_c(stats, mmwcov::blockage::RstMethod::area);
            fits["rst"] = {
                {"c_perimeter_m", c_perim},
                {"c_area_m", c_area},
                {"rmse_percent_perimeter",
                 rms_against([&](double d) { return std::exp(-d / c_perim); })},
                {"rmse_percent_area",
                 rms_against([&](double d) { return std::exp(-d / c_area); })}};
        } catch (const std::exception& e) {
            if (!all) throw;
            fits["rst"] = {{"error", e.what()}};
        }
    }
    if (all || model == "losball") {
        mmwcov::Xoshiro256pp prng(seed, 1);
        const double p_l = mmwcov::geodata::fit_p_l(set, radius, users, prng);
        fits["generalized_los_ball"] = {
            {"radius_m", radius},
            {"los_fraction", p_l},
            {"rmse_percent",
             rms_against([&](double d) { return d < radius ? p_l : 0.0; })}};
    }
    doc["fits"] = std::move(fits);
    mmwcov::write_file(out, doc.dump(2) + "\n");
    return 0;
}

int run_compare(const CommonOpts& o, const ThresholdOpts& t, const std::string& kind,
                double gap_tol, const std::string& command) {
    const auto start = std::chrono::steady_clock::now();
    auto sc = load_scenario(o);
    const auto grid = db_grid(t);
    const CoverageCurve analytic =
        kind == "snr"
            ? mmwcov::analytic::snr_coverage(sc.sim.network, grid, sc.quad, sc.sim.threads)
            : mmwcov::analytic::sinr_coverage(sc.sim.network, grid, sc.quad, sc.sim.threads);
    const CoverageCurve empirical = mmwcov::montecarlo::empirical_ccdf(
        sc.sim, kind == "snr" ? CurveKind::snr : CurveKind::sinr, grid);

    const std::string fp = mmwcov::config::fingerprint(mmwcov::config::to_json(sc));
    double max_gap = 0.0;
    bool ok = true;
    std::string csv;
    csv += "kind,threshold,analytic,empirical,ci99_halfwidth,gap,within\n";
    char buf[200];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a = analytic.points[i].probability;
        const double e = empirical.points[i].probability;
        const double ci = empirical.points[i].ci99_halfwidth.value_or(0.0);
        const double gap = std::abs(a - e);
        const double allowed = gap_tol > 0.0 ? gap_tol : ci;
        const bool within = gap <= allowed;
        ok = ok && within;
        max_gap = std::max(max_gap, gap);
        std::snprintf(buf, sizeof(buf), "%s,%.10g,%.10g,%.10g,%.10g,%.10g,%d\n",
                      mmwcov::curve_kind_name(analytic.kind), grid[i], a, e, ci, gap,
                      within ? 1 : 0);
        csv += buf;
    }
    const double dur =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string manifest = write_manifest(o, sc, command, dur, {o.out});
    mmwcov::write_file(o.out, "# manifest=" + manifest + " config=" + fp + "\n" + csv);
    std::printf("compare: max |analytic - empirical| = %.6g (%s)\n", max_gap,
                ok ? "within tolerance" : "EXCEEDS tolerance");
    return ok ? 0 : kExitCompareGap;
}

int run_sweep(const CommonOpts& o, const std::string& param,
              const std::vector<double>& values_per_km2, const std::string& metric, double t_db,
              const std::string& command) {
    const auto start = std::chrono::steady_clock::now();
    auto sc = load_scenario(o);
    if (param != "density") throw ConfigError("--param: only 'density' is supported");
    if (values_per_km2.size() < 3) throw ConfigError("--values: need at least 3 densities");
    std::vector<double> densities;
    for (const double v : values_per_km2) densities.push_back(v / 1e6);
    const auto m = metric == "inr_exceedance"
                       ? mmwcov::montecarlo::SweepMetric::inr_exceedance
                       : mmwcov::montecarlo::SweepMetric::coverage_at_t;
    const auto points = mmwcov::montecarlo::density_sweep(sc.sim, densities, m, t_db);

    const std::string fp = mmwcov::config::fingerprint(mmwcov::config::to_json(sc));
    std::string csv = "density_per_km2,isd_m,metric,threshold_db,value,ci99_halfwidth\n";
    char buf[200];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof(buf), "%.10g,%.10g,%s,%.10g,%.10g,%.10g\n", p.density * 1e6,
                      p.isd, metric.c_str(), t_db, p.value, p.ci99_halfwidth);
        csv += buf;
    }
    const double dur =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string manifest = write_manifest(o, sc, command, dur, {o.out});
    mmwcov::write_file(o.out, "# manifest=" + manifest + " config=" + fp + "\n" + csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mmWave cellular coverage: analytic curves and Monte Carlo simulation"};
    app.require_subcommand(1);
    const std::string command = command_line(argc, argv);

    CommonOpts common;
    ThresholdOpts thresholds;

    auto* analyze = app.add_subcommand("analyze", "evaluate analytic coverage curves");
    std::string analyze_kind = "sinr";
    std::string load_model = "full";
    int n_max = 0;
    add_common(analyze, common);
    add_threshold_flags(analyze, thresholds);
    analyze->add_option("--kind", analyze_kind, "sinr|snr|sir|rate")
        ->check(CLI::IsMember({"sinr", "snr", "sir", "rate"}));
    analyze->add_option("--load-model", load_model, "full|mean (rate only)")
        ->check(CLI::IsMember({"full", "mean"}));
    analyze->add_option("--n-max", n_max, "rate load truncation (0 = auto)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo CCDF with confidence bands");
    std::string sim_kind = "sinr";
    long dump_count = 0;
    std::string dump_out;
    add_common(simulate, common);
    add_threshold_flags(simulate, thresholds);
    simulate->add_option("--kind", sim_kind, "sinr|snr|sir|inr|rate")
        ->check(CLI::IsMember({"sinr", "snr", "sir", "inr", "rate"}));
    simulate->add_option("--dump-snapshots", dump_count, "write the first N snapshots as JSONL");
    simulate->add_option("--dump-out", dump_out, "snapshot dump path");

    auto* fit = app.add_subcommand("fit", "fit blockage models to building footprints");
    std::string buildings_path, fit_model = "all", fit_out;
    double fit_radius = 200.0, fit_bin = 10.0, fit_maxdist = 0.0;
    long fit_pairs = 20000, fit_users = 200;
    std::uint64_t fit_seed = 1;
    fit->add_option("--buildings", buildings_path, "building footprint file")->required();
    fit->add_option("--model", fit_model, "3gpp|rst|losball|all")
        ->check(CLI::IsMember({"3gpp", "rst", "losball", "all"}));
    fit->add_option("--out", fit_out, "output JSON path")->required();
    fit->add_option("--radius", fit_radius, "LOS ball radius (m)");
    fit->add_option("--pairs", fit_pairs, "sampled point pairs");
    fit->add_option("--bin-width", fit_bin, "distance bin width (m)");
    fit->add_option("--max-distance", fit_maxdist, "max pair distance (m, 0 = auto)");
    fit->add_option("--users", fit_users, "sampled users for the LOS fraction");
    fit->add_option("--seed", fit_seed, "sampling seed");

    auto* compare = app.add_subcommand("compare", "analytic vs Monte Carlo gap report");
    std::string cmp_kind = "sinr";
    double gap_tol = 0.0;
    add_common(compare, common);
    add_threshold_flags(compare, thresholds);
    compare->add_option("--kind", cmp_kind, "sinr|snr")
        ->check(CLI::IsMember({"sinr", "snr"}));
    compare->add_option("--gap-tol", gap_tol,
                        "absolute gap tolerance (0 = per-point 99% CI half-width)");

    auto* sweep = app.add_subcommand("sweep", "metric over a density grid");
    std::string sweep_param = "density", sweep_metric = "coverage_at_t";
    std::vector<double> sweep_values;
    double sweep_t_db = 10.0;
    add_common(sweep, common);
    sweep->add_option("--param", sweep_param, "swept parameter (density)");
    sweep->add_option("--values", sweep_values, "densities per km^2")
        ->delimiter(',')
        ->required();
    sweep->add_option("--metric", sweep_metric, "coverage_at_t|inr_exceedance")
        ->check(CLI::IsMember({"coverage_at_t", "inr_exceedance"}));
    sweep->add_option("--t-db", sweep_t_db, "metric threshold (dB)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed())
            return run_analyze(common, thresholds, analyze_kind, load_model, n_max, command);
        if (simulate->parsed())
            return run_simulate(common, thresholds, sim_kind, dump_count, dump_out, command);
        if (fit->parsed())
            return run_fit(buildings_path, fit_model, fit_radius, fit_pairs, fit_bin,
                           fit_maxdist, fit_users, fit_seed, fit_out);
        if (compare->parsed())
            return run_compare(common, thresholds, cmp_kind, gap_tol, command);
        if (sweep->parsed())
            return run_sweep(common, sweep_param, sweep_values, sweep_metric, sweep_t_db,
                             command);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
