/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MMWCOV_MONTECARLO_HPP
#define MMWCOV_MONTECARLO_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "mmwcov/analytic.hpp"
#include "mmwcov/curve.hpp"
#include "mmwcov/geodata.hpp"

namespace mmwcov::montecarlo {

struct Shadowing {
    double sigma_los_db = 0.0;
    double sigma_nlos_db = 0.0;
};

/// How RATE snapshots obtain the serving-cell load: drawn from the
/// Poisson-Voronoi serving PMF (default, matches the analytic assumption) or
/// measured by associating an explicit user point process.
enum class RateLoadMode { pmf, measured_cells };

struct SimConfig {
    analytic::NetworkConfig network;
    double sim_radius_m = 0.0;  // 0 = auto: max(2 km, radius holding 500 BSs)
    long snapshots = 10000;
    std::uint64_t seed = 1;
    int threads = 0;            // 0 = hardware concurrency
    std::optional<Shadowing> shadowing;
    /// Statistical blocking when null; otherwise LOS is decided by segment
    /// tests against these footprints and nodes are placed outdoors.
    std::shared_ptr<const geodata::BuildingSet> buildings;
    RateLoadMode rate_load = RateLoadMode::pmf;
};

/// Resolved simulation radius; enforces the 500-expected-BS floor.
double effective_sim_radius(const SimConfig& cfg);
void validate(const SimConfig& cfg);

struct LinkSample {
    double distance = 0.0;
    bool los = false;
    double gain = 1.0;       // joint directivity gain
    double fading = 1.0;     // Nakagami power fading
    double path_gain = 0.0;  // includes shadowing when enabled
};

/// One network realization seen from the typical user.
struct Snapshot {
    LinkSample serving;
    std::vector<LinkSample> interferers;
    double sinr = 0.0;
    double inr = 0.0;
    long resample_count = 0;  // empty-network redraws
};

/// Deterministic function of (config, seed, stream_index).
Snapshot sample_snapshot(const SimConfig& cfg, std::uint64_t stream_index);

/// Monte Carlo CCDF with 99% binomial confidence half-widths. Thresholds in
/// dB for SINR/SNR/SIR/INR, bits per second for RATE.
CoverageCurve empirical_ccdf(const SimConfig& cfg, CurveKind kind,
                             const std::vector<double>& thresholds);

/// First `count` snapshots as JSON lines (debugging aid).
std::string dump_snapshots(const SimConfig& cfg, long count);

enum class SweepMetric { coverage_at_t, inr_exceedance };

struct SweepPoint {
    double density = 0.0;       // per m^2
    double isd = 0.0;           // 2 / sqrt(pi density)
    double value = 0.0;
    double ci99_halfwidth = 0.0;
};

/// Per-density metric over a density grid; snapshots and seed come from cfg.
std::vector<SweepPoint> density_sweep(const SimConfig& cfg, const std::vector<double>& densities,
                                      SweepMetric metric, double t_db);

/// Empirical serving-cell load PMF (index = number of users in the cell of a
/// uniformly random user's BS); joint BS and user processes, minimum path
/// loss association.
std::vector<double> measure_load(double bs_density, double user_density, long snapshots,
                                 std::uint64_t seed = 1, int threads = 0);

}  // namespace mmwcov::montecarlo

#endif  // MMWCOV_MONTECARLO_HPP
