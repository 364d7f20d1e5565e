/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MMWCOV_ANALYTIC_HPP
#define MMWCOV_ANALYTIC_HPP

#include <functional>
#include <vector>

#include "mmwcov/blockage.hpp"
#include "mmwcov/curve.hpp"
#include "mmwcov/propagation.hpp"
#include "mmwcov/quadrature.hpp"

namespace mmwcov::analytic {

/// Full scenario parameterization shared by the analytic and Monte Carlo
/// paths. Linear power units throughout; dB only at I/O boundaries.
struct NetworkConfig {
    double bs_density = 1e-4;    // per m^2
    double user_density = 1e-3;  // per m^2
    blockage::LosModel los_model = blockage::LosBall{200.0};
    propagation::PathLossParams pathloss{};
    propagation::AntennaPattern bs_pattern{};
    propagation::AntennaPattern ms_pattern{};
    propagation::FadingParams fading{};
    double noise_power = 0.0;    // sigma^2 normalized by transmit power
    double bandwidth_hz = 2e8;
};

void validate(const NetworkConfig& cfg);

struct AssociationResult {
    double a_los = 0.0;
    double a_nlos = 0.0;
    std::function<double(double)> pdf_los;   // serving-distance density | LOS
    std::function<double(double)> pdf_nlos;  // serving-distance density | NLOS
};

/// Probability of associating with a LOS/NLOS base station under minimum
/// path loss association, plus the conditional serving-distance densities.
AssociationResult association(const NetworkConfig& cfg, const Quadrature& quad = {});

/// SINR CCDF at the given dB thresholds (Nakagami serving fading handled by
/// the Alzer bound; exact for nu = 1).
CoverageCurve sinr_coverage(const NetworkConfig& cfg, const std::vector<double>& thresholds_db,
                            const Quadrature& quad = {}, int threads = 0);

/// SINR coverage with the interference terms removed.
CoverageCurve snr_coverage(const NetworkConfig& cfg, const std::vector<double>& thresholds_db,
                           const Quadrature& quad = {}, int threads = 0);

/// SINR coverage with the noise power forced to zero.
CoverageCurve sir_coverage(const NetworkConfig& cfg, const std::vector<double>& thresholds_db,
                           const Quadrature& quad = {}, int threads = 0);

enum class CellKind { serving, typical };

/// Poisson-Voronoi cell-load PMF for a user-to-BS density ratio: the cell
/// serving a random user (n >= 1) or a typical cell (n >= 0).
double load_pmf(double ratio, CellKind cell, int n);

/// Truncation depth used by rate_coverage when none is given.
int default_rate_n_max(double ratio);

/// Rate CCDF at the given bps thresholds: load-weighted mixture of SINR
/// coverage values, truncated at n_max (load PMF renormalized so tau = 0
/// maps to exactly 1; a warning records tail mass above 1e-3).
CoverageCurve rate_coverage(const NetworkConfig& cfg, const std::vector<double>& tau_bps,
                            const Quadrature& quad = {}, int n_max = 0, int threads = 0);

/// Mean-load approximation of the rate CCDF.
CoverageCurve rate_coverage_mean_load(const NetworkConfig& cfg,
                                      const std::vector<double>& tau_bps,
                                      const Quadrature& quad = {}, int threads = 0);

struct UplinkDensities {
    double lambda_los = 0.0;   // per m^2
    double lambda_nlos = 0.0;  // per m^2
};

/// Density functions of the LOS/NLOS other-cell uplink user processes at
/// distance r from the serving base station.
UplinkDensities uplink_densities(const NetworkConfig& cfg, double r);

/// Rate CCDF of a two-tier network from per-tier rate curves and the tier
/// association probability (curves must share a threshold grid).
CoverageCurve hetnet_rate(double a_mmw, const CoverageCurve& r_mmw, const CoverageCurve& r_uhf);

}  // namespace mmwcov::analytic

#endif  // MMWCOV_ANALYTIC_HPP
