/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mmwcov/analytic.hpp"
#include "mmwcov/blockage.hpp"
#include "mmwcov/common.hpp"
#include "mmwcov/config.hpp"
#include "mmwcov/curve.hpp"
#include "mmwcov/geodata.hpp"
#include "mmwcov/montecarlo.hpp"
#include "mmwcov/propagation.hpp"

namespace py = pybind11;
using namespace mmwcov;

namespace {

config::Scenario scenario_from_json_text(const std::string& text) {
    return config::from_json(nlohmann::json::parse(text));
}

py::dict curve_to_dict(const CoverageCurve& curve) {
    py::list thresholds, probs, ci;
    bool has_ci = false;
    for (const auto& p : curve.points) {
        thresholds.append(p.threshold);
        probs.append(p.probability);
        if (p.ci99_halfwidth) {
            has_ci = true;
            ci.append(*p.ci99_halfwidth);
        }
    }
    py::dict d;
    d["kind"] = curve_kind_name(curve.kind);
    d["threshold"] = thresholds;
    d["probability"] = probs;
    if (has_ci) d["ci99_halfwidth"] = ci;
    if (!curve.warnings.empty()) d["warnings"] = curve.warnings;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "mmWave cellular coverage analysis: analytic stochastic-geometry curves and "
              "Monte Carlo simulation";

    // ---- blockage -------------------------------------------------------
    py::class_<blockage::ThreeGppUrban>(m, "ThreeGppUrban")
        .def(py::init<double, double>(), py::arg("a_m") = 18.0, py::arg("b_m") = 63.0)
        .def_readwrite("a_m", &blockage::ThreeGppUrban::a_m)
        .def_readwrite("b_m", &blockage::ThreeGppUrban::b_m);
    py::class_<blockage::SuburbanExp>(m, "SuburbanExp")
        .def(py::init<double>(), py::arg("c_m") = 200.0)
        .def_readwrite("c_m", &blockage::SuburbanExp::c_m);
    py::class_<blockage::LosBall>(m, "LosBall")
        .def(py::init<double>(), py::arg("radius_m") = 200.0)
        .def_readwrite("radius_m", &blockage::LosBall::radius_m);
    py::class_<blockage::GeneralizedLosBall>(m, "GeneralizedLosBall")
        .def(py::init<double, double>(), py::arg("radius_m") = 200.0,
             py::arg("los_fraction") = 1.0)
        .def_readwrite("radius_m", &blockage::GeneralizedLosBall::radius_m)
        .def_readwrite("los_fraction", &blockage::GeneralizedLosBall::los_fraction);
    py::class_<blockage::EmpiricalTable>(m, "EmpiricalTable")
        .def(py::init([](std::vector<double> d, std::vector<double> p) {
                 return blockage::EmpiricalTable{std::move(d), std::move(p)};
             }),
             py::arg("distances_m"), py::arg("probs"))
        .def_readwrite("distances_m", &blockage::EmpiricalTable::distances_m)
        .def_readwrite("probs", &blockage::EmpiricalTable::probs);

    py::class_<blockage::BuildingStats>(m, "BuildingStats")
        .def(py::init<>())
        .def_readwrite("density_per_m2", &blockage::BuildingStats::density_per_m2)
        .def_readwrite("mean_perimeter_m", &blockage::BuildingStats::mean_perimeter_m)
        .def_readwrite("mean_area_m2", &blockage::BuildingStats::mean_area_m2)
        .def_readwrite("covered_fraction", &blockage::BuildingStats::covered_fraction);

    m.def("p_los", &blockage::p_los, py::arg("model"), py::arg("distance_m"),
          "LOS probability of a link of the given length");
    m.def(
        "rst_c",
        [](const blockage::BuildingStats& s, const std::string& method) {
            return blockage::rst_c(s, method == "area" ? blockage::RstMethod::area
                                                       : blockage::RstMethod::perimeter);
        },
        py::arg("stats"), py::arg("method") = "perimeter");
    m.def("los_ball_radius", &blockage::los_ball_radius, py::arg("stats"));
    m.def(
        "fit_3gpp_urban",
        [](const blockage::EmpiricalTable& t) {
            const auto fit = blockage::fit_3gpp_urban(t);
            return py::make_tuple(fit.model.a_m, fit.model.b_m, fit.rmse_percent);
        },
        py::arg("table"), "returns (a_m, b_m, rmse_percent)");
    m.def(
        "fit_suburban_exp",
        [](const blockage::EmpiricalTable& t) {
            const auto fit = blockage::fit_suburban_exp(t);
            return py::make_tuple(fit.model.c_m, fit.rmse_percent);
        },
        py::arg("table"), "returns (c_m, rmse_percent)");

    // ---- propagation ----------------------------------------------------
    py::class_<propagation::AntennaPattern>(m, "AntennaPattern")
        .def(py::init<double, double, double>(), py::arg("main_gain") = 1.0,
             py::arg("side_gain") = 1.0, py::arg("beamwidth") = 2.0 * kPi)
        .def_readwrite("main_gain", &propagation::AntennaPattern::main_gain)
        .def_readwrite("side_gain", &propagation::AntennaPattern::side_gain)
        .def_readwrite("beamwidth", &propagation::AntennaPattern::beamwidth);

    m.def(
        "path_loss",
        [](double c, double alpha, double d) {
            return propagation::path_loss({c, c, alpha, alpha}, d,
                                          propagation::LinkState::los);
        },
        py::arg("intercept"), py::arg("alpha"), py::arg("distance_m"),
        "power-law path loss gain intercept * d^-alpha");
    m.def("friis_intercept_1m", &friis_intercept_1m, py::arg("carrier_hz"));
    m.def(
        "gain_pmf",
        [](const propagation::AntennaPattern& bs, const propagation::AntennaPattern& ms) {
            const auto pmf = propagation::gain_pmf(bs, ms);
            py::dict d;
            d["gains"] = std::vector<double>(pmf.gains.begin(), pmf.gains.end());
            d["probs"] = std::vector<double>(pmf.probs.begin(), pmf.probs.end());
            d["serving_gain"] = pmf.serving_gain;
            return d;
        },
        py::arg("bs"), py::arg("ms"));
    m.def("ula_gain", &propagation::ula_gain, py::arg("n_antennas"),
          py::arg("spacing_wavelengths"), py::arg("steer"), py::arg("actual"));
    m.def("sectored_fit", &propagation::sectored_fit, py::arg("n_antennas"),
          py::arg("spacing_wavelengths") = 0.5);
    m.def("alzer_ccdf_bound", &propagation::alzer_ccdf_bound, py::arg("nu"), py::arg("gamma"));
    m.def(
        "sample_nakagami",
        [](int nu, long count, std::uint64_t seed) {
            Xoshiro256pp rng(seed, 0);
            std::vector<double> out(count);
            for (auto& v : out) v = propagation::sample_nakagami(nu, rng);
            return out;
        },
        py::arg("nu"), py::arg("count") = 1, py::arg("seed") = 1);

    // ---- scenario / analytic ---------------------------------------------
    py::class_<config::Scenario>(m, "Scenario")
        .def_static("load", &config::load_file, py::arg("path"))
        .def_static("from_json", &scenario_from_json_text, py::arg("text"))
        .def_property_readonly("fingerprint",
                               [](const config::Scenario& sc) {
                                   return config::fingerprint(config::to_json(sc));
                               })
        .def_property_readonly(
            "resolved", [](const config::Scenario& sc) { return config::to_json(sc).dump(2); })
        .def_property(
            "seed", [](const config::Scenario& sc) { return sc.sim.seed; },
            [](config::Scenario& sc, std::uint64_t s) { sc.sim.seed = s; })
        .def_property(
            "snapshots", [](const config::Scenario& sc) { return sc.sim.snapshots; },
            [](config::Scenario& sc, long n) { sc.sim.snapshots = n; })
        .def_property(
            "threads", [](const config::Scenario& sc) { return sc.sim.threads; },
            [](config::Scenario& sc, int n) { sc.sim.threads = n; });

    m.def(
        "association",
        [](const config::Scenario& sc) {
            const auto a = analytic::association(sc.sim.network, sc.quad);
            py::dict d;
            d["a_los"] = a.a_los;
            d["a_nlos"] = a.a_nlos;
            d["pdf_los"] = a.pdf_los;
            d["pdf_nlos"] = a.pdf_nlos;
            return d;
        },
        py::arg("scenario"));
    m.def(
        "sinr_coverage",
        [](const config::Scenario& sc, const std::vector<double>& thr) {
            return curve_to_dict(
                analytic::sinr_coverage(sc.sim.network, thr, sc.quad, sc.sim.threads));
        },
        py::arg("scenario"), py::arg("thresholds_db"));
    m.def(
        "snr_coverage",
        [](const config::Scenario& sc, const std::vector<double>& thr) {
            return curve_to_dict(
                analytic::snr_coverage(sc.sim.network, thr, sc.quad, sc.sim.threads));
        },
        py::arg("scenario"), py::arg("thresholds_db"));
    m.def(
        "sir_coverage",
        [](const config::Scenario& sc, const std::vector<double>& thr) {
            return curve_to_dict(
                analytic::sir_coverage(sc.sim.network, thr, sc.quad, sc.sim.threads));
        },
        py::arg("scenario"), py::arg("thresholds_db"));
    m.def(
        "rate_coverage",
        [](const config::Scenario& sc, const std::vector<double>& tau, int n_max) {
            return curve_to_dict(
                analytic::rate_coverage(sc.sim.network, tau, sc.quad, n_max, sc.sim.threads));
        },
        py::arg("scenario"), py::arg("tau_bps"), py::arg("n_max") = 0);
    m.def(
        "rate_coverage_mean_load",
        [](const config::Scenario& sc, const std::vector<double>& tau) {
            return curve_to_dict(analytic::rate_coverage_mean_load(sc.sim.network, tau, sc.quad,
                                                                   sc.sim.threads));
        },
        py::arg("scenario"), py::arg("tau_bps"));
    m.def(
        "load_pmf",
        [](double ratio, const std::string& cell, int n) {
            return analytic::load_pmf(
                ratio, cell == "typical" ? analytic::CellKind::typical
                                         : analytic::CellKind::serving,
                n);
        },
        py::arg("ratio"), py::arg("cell"), py::arg("n"));
    m.def(
        "uplink_densities",
        [](const config::Scenario& sc, double r) {
            const auto u = analytic::uplink_densities(sc.sim.network, r);
            return py::make_tuple(u.lambda_los, u.lambda_nlos);
        },
        py::arg("scenario"), py::arg("r_m"));

    // ---- monte carlo ------------------------------------------------------
    m.def(
        "empirical_ccdf",
        [](const config::Scenario& sc, const std::string& kind,
           const std::vector<double>& thresholds) {
            return curve_to_dict(
                montecarlo::empirical_ccdf(sc.sim, curve_kind_from_name(kind), thresholds));
        },
        py::arg("scenario"), py::arg("kind"), py::arg("thresholds"));
    m.def(
        "sample_snapshot",
        [](const config::Scenario& sc, std::uint64_t index) {
            const auto s = montecarlo::sample_snapshot(sc.sim, index);
            py::dict d;
            d["sinr"] = s.sinr;
            d["inr"] = s.inr;
            d["serving_distance_m"] = s.serving.distance;
            d["serving_los"] = s.serving.los;
            d["interferers"] = s.interferers.size();
            d["resamples"] = s.resample_count;
            return d;
        },
        py::arg("scenario"), py::arg("index"));
    m.def(
        "density_sweep",
        [](const config::Scenario& sc, const std::vector<double>& densities,
           const std::string& metric, double t_db) {
            const auto points = montecarlo::density_sweep(
                sc.sim, densities,
                metric == "inr_exceedance" ? montecarlo::SweepMetric::inr_exceedance
                                           : montecarlo::SweepMetric::coverage_at_t,
                t_db);
            py::list out;
            for (const auto& p : points)
                out.append(py::make_tuple(p.density, p.isd, p.value, p.ci99_halfwidth));
            return out;
        },
        py::arg("scenario"), py::arg("densities_per_m2"), py::arg("metric"), py::arg("t_db"));
    m.def("measure_load", &montecarlo::measure_load, py::arg("bs_density"),
          py::arg("user_density"), py::arg("snapshots"), py::arg("seed") = 1,
          py::arg("threads") = 0);

    // ---- geodata -----------------------------------------------------------
    py::class_<geodata::BuildingSet, std::shared_ptr<geodata::BuildingSet>>(m, "BuildingSet")
        .def_static("load", &geodata::BuildingSet::load, py::arg("path"))
        .def("save", &geodata::BuildingSet::save, py::arg("path"))
        .def("polygon_count",
             [](const geodata::BuildingSet& s) { return s.polygons().size(); })
        .def(
            "segment_blocked",
            [](const geodata::BuildingSet& s, double x1, double y1, double x2, double y2) {
                return s.segment_blocked({x1, y1}, {x2, y2});
            },
            py::arg("x1"), py::arg("y1"), py::arg("x2"), py::arg("y2"))
        .def("stats", [](const geodata::BuildingSet& s) { return geodata::building_stats(s); })
        .def(
            "empirical_p_los",
            [](const geodata::BuildingSet& s, long pairs, double bin_width, std::uint64_t seed,
               double max_distance) {
                Xoshiro256pp rng(seed, 0);
                const auto e = geodata::empirical_p_los(s, pairs, bin_width, rng, max_distance);
                blockage::EmpiricalTable t = e.table;
                return py::make_tuple(t, e.counts);
            },
            py::arg("pairs"), py::arg("bin_width") = 10.0, py::arg("seed") = 1,
            py::arg("max_distance") = 0.0)
        .def(
            "fit_p_l",
            [](const geodata::BuildingSet& s, double radius, long users, std::uint64_t seed) {
                Xoshiro256pp rng(seed, 0);
                return geodata::fit_p_l(s, radius, users, rng);
            },
            py::arg("radius_m") = 200.0, py::arg("users") = 200, py::arg("seed") = 1);
    m.def(
        "boolean_rectangle_field",
        [](double xmin, double ymin, double xmax, double ymax, double density, double w,
           double h, std::uint64_t seed) {
            return std::make_shared<geodata::BuildingSet>(geodata::boolean_rectangle_field(
                {xmin, ymin, xmax, ymax}, density, w, h, seed));
        },
        py::arg("xmin"), py::arg("ymin"), py::arg("xmax"), py::arg("ymax"),
        py::arg("density_per_m2"), py::arg("width_m"), py::arg("height_m"), py::arg("seed") = 1);

    m.attr("__version__") = kVersion;
}
