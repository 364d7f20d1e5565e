# Copyright (c) 2026 the mmwcov authors
#
# SPDX-License-Identifier: Apache-2.0

"""mmWave cellular coverage analysis.

Analytic stochastic-geometry SINR/rate coverage curves and a seeded Monte
Carlo network simulator sharing one scenario configuration, plus building
footprint processing for blockage-model fitting.
"""

from ._core import (  # noqa: F401
    AntennaPattern,
    BuildingSet,
    BuildingStats,
    EmpiricalTable,
    GeneralizedLosBall,
    LosBall,
    Scenario,
    SuburbanExp,
    ThreeGppUrban,
    __version__,
    alzer_ccdf_bound,
    association,
    boolean_rectangle_field,
    density_sweep,
    empirical_ccdf,
    fit_3gpp_urban,
    fit_suburban_exp,
    friis_intercept_1m,
    gain_pmf,
    load_pmf,
    los_ball_radius,
    measure_load,
    p_los,
    path_loss,
    rate_coverage,
    rate_coverage_mean_load,
    rst_c,
    sample_nakagami,
    sample_snapshot,
    sinr_coverage,
    sir_coverage,
    snr_coverage,
    sectored_fit,
    ula_gain,
    uplink_densities,
)
