/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MMWCOV_CURVE_HPP
#define MMWCOV_CURVE_HPP

#include <optional>
#include <string>
#include <vector>

namespace mmwcov {

enum class CurveKind { sinr, snr, sir, inr, rate };

const char* curve_kind_name(CurveKind kind);
CurveKind curve_kind_from_name(const std::string& name);

struct CurvePoint {
    double threshold = 0.0;    // dB for SINR/SNR/SIR/INR, bps for RATE
    double probability = 0.0;
    std::optional<double> ci99_halfwidth;  // only Monte Carlo curves carry one
};

/// Sampled threshold -> probability mapping (a CCDF for every kind).
struct CoverageCurve {
    CurveKind kind = CurveKind::sinr;
    std::vector<CurvePoint> points;
    std::string fingerprint;               // hash of the resolved config
    std::vector<std::string> warnings;

    /// Thresholds strictly increasing, probabilities within [0,1] and
    /// non-increasing; throws std::logic_error otherwise.
    void check_invariants(double tolerance = 1e-9) const;

    /// CSV body: a '#' comment line naming the manifest and config
    /// fingerprint, a header row, one row per point.
    std::string to_csv(const std::string& manifest_ref) const;
};

void write_file(const std::string& path, const std::string& contents);

}  // namespace mmwcov

#endif  // MMWCOV_CURVE_HPP
