/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MMWCOV_BLOCKAGE_HPP
#define MMWCOV_BLOCKAGE_HPP

#include <limits>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mmwcov::blockage {

/// 3GPP urban-microcell LOS probability,
/// P(d) = min(A/d, 1) (1 - exp(-d/B)) + exp(-d/B).
struct ThreeGppUrban {
    double a_m = 18.0;
    double b_m = 63.0;
};

/// Negative-exponential LOS probability, P(d) = exp(-d/C). Also the form
/// predicted by the Boolean germ-grain (random shape theory) building model.
struct SuburbanExp {
    double c_m = 200.0;
};

/// Step-function LOS probability, P(d) = 1{d < R}.
struct LosBall {
    double radius_m = 200.0;
};

/// Step-function LOS probability with a LOS-fraction plateau,
/// P(d) = p * 1{d < R}.
struct GeneralizedLosBall {
    double radius_m = 200.0;
    double los_fraction = 1.0;
};

/// Distance-binned LOS fractions; evaluated by linear interpolation and
/// clamped to the endpoint values outside the tabulated range.
struct EmpiricalTable {
    std::vector<double> distances_m;
    std::vector<double> probs;
};

using LosModel =
    std::variant<ThreeGppUrban, SuburbanExp, LosBall, GeneralizedLosBall, EmpiricalTable>;

/// Throws std::invalid_argument naming the offending field.
void validate(const LosModel& model);

/// LOS probability of a link of length d >= 0 (meters).
double p_los(const LosModel& model, double d);

/// Exact value of the integral of P_LOS(r) * r dr over [0, x]; this is the
/// quantity every void-probability and Laplace-functional expression needs.
double p_los_radial_integral(const LosModel& model, double x);

/// Upper end of the support of P_LOS, or +inf when P_LOS never reaches zero.
double los_support_max(const LosModel& model);

/// First-order footprint statistics of a building field.
struct BuildingStats {
    double density_per_m2 = 0.0;   // buildings per unit area
    double mean_perimeter_m = 0.0;
    double mean_area_m2 = 0.0;
    double covered_fraction = 0.0; // fraction of ground covered by buildings
};

enum class RstMethod { perimeter, area };

/// Decay distance C of the negative-exponential LOS model predicted by the
/// Boolean rectangle field: pi / (lambda * E[perimeter]) for the perimeter
/// method, -pi E[area] / (ln(1 - kappa) E[perimeter]) for the area method.
double rst_c(const BuildingStats& stats, RstMethod method);

/// LOS-ball radius matching the mean LOS area of the Boolean rectangle
/// field: sqrt(2) * pi / (lambda * E[perimeter]) = sqrt(2) * C. Equivalent
/// to equating pi R^2 with the mean LOS area of exp(-d/C) blocking.
double los_ball_radius(const BuildingStats& stats);

struct UrbanFit {
    ThreeGppUrban model;
    double rmse_percent = 0.0;  // RMS residual in percentage points
    bool converged = false;
};

struct SuburbanFit {
    SuburbanExp model;
    double rmse_percent = 0.0;
};

/// Raised when the LOS-probability fit does not converge; carries the best
/// iterate found so callers can inspect it.
class FitError : public std::runtime_error {
public:
    FitError(std::string what, UrbanFit best)
        : std::runtime_error(std::move(what)), best_(best) {}
    const UrbanFit& best() const noexcept { return best_; }

private:
    UrbanFit best_;
};

/// Bounded least-squares fit of (A, B) in the 3GPP urban model to a measured
/// LOS table. Multi-start Nelder-Mead over A in (0, 100], B in (0, 1000].
UrbanFit fit_3gpp_urban(const EmpiricalTable& table);

/// One-parameter least-squares fit of exp(-d/C) to a measured LOS table.
SuburbanFit fit_suburban_exp(const EmpiricalTable& table);

}  // namespace mmwcov::blockage

#endif  // MMWCOV_BLOCKAGE_HPP
