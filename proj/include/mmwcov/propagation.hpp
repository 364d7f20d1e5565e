/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MMWCOV_PROPAGATION_HPP
#define MMWCOV_PROPAGATION_HPP

#include <array>
#include <cstdint>

#include "mmwcov/rng.hpp"

namespace mmwcov::propagation {

enum class LinkState { los, nlos };

/// Dual-slope power-law path loss in gain form: gain(d) = C_s d^{-alpha_s}.
struct PathLossParams {
    double c_los = 1.0;      // linear gain at 1 m, LOS
    double c_nlos = 1.0;     // linear gain at 1 m, NLOS
    double alpha_los = 2.0;
    double alpha_nlos = 4.0;
};

void validate(const PathLossParams& p);

/// Links shorter than this are resampled by the simulator; the power law is
/// only evaluated at or beyond the 1 m reference distance.
inline constexpr double kMinPathLossDistance = 1.0;

/// Path loss gain C_s d^{-alpha_s} for d >= kMinPathLossDistance.
double path_loss(const PathLossParams& p, double d, LinkState state);

/// Sectored (step) beam pattern: main-lobe gain over the beamwidth, constant
/// side-lobe gain elsewhere.
struct AntennaPattern {
    double main_gain = 1.0;   // linear
    double side_gain = 1.0;   // linear
    double beamwidth = 6.283185307179586;  // radians, (0, 2pi]
};

void validate(const AntennaPattern& p);

/// Joint TX/RX directivity gain of an interfering link under uniformly
/// random steering: four atoms (gain, probability) plus the deterministic
/// aligned-beam serving gain.
struct GainPmf {
    std::array<double, 4> gains{};
    std::array<double, 4> probs{};
    double serving_gain = 1.0;  // M_bs * M_ms

    double mean() const {
        double m = 0.0;
        for (int k = 0; k < 4; ++k) m += gains[k] * probs[k];
        return m;
    }
};

GainPmf gain_pmf(const AntennaPattern& bs, const AntennaPattern& ms);

/// Nakagami fading shape parameters per link state (integer >= 1).
struct FadingParams {
    int nu_los = 3;
    int nu_nlos = 2;
};

void validate(const FadingParams& f);

/// Normalized Gamma power fading sample: Gamma(shape nu, scale 1/nu), mean 1.
double sample_nakagami(int nu, Xoshiro256pp& rng);

/// Exact power gain of an N-element uniform linear array steered to `steer`
/// and observed at `actual` (physical angles, radians). Equals n when the
/// beam is aligned.
double ula_gain(int n_antennas, double spacing_wavelengths, double steer, double actual);

/// Sectored approximation of a ULA pattern: main gain n, 3 dB beamwidth
/// solved numerically, side gain chosen so total radiated power over
/// [-pi, pi] matches the exact pattern.
AntennaPattern sectored_fit(int n_antennas, double spacing_wavelengths = 0.5);

/// Upper bound on P(h > gamma) for normalized Gamma h with integer shape nu:
/// sum_{n=1..nu} (-1)^{n+1} C(nu,n) exp(-eta n gamma), eta = nu (nu!)^{-1/nu}.
/// Exact at nu = 1.
double alzer_ccdf_bound(int nu, double gamma);

/// eta = nu * (nu!)^{-1/nu}, the Alzer bound rate constant.
double alzer_eta(int nu);

/// Largest Nakagami shape accepted by the analytic path; the alternating
/// binomial sum loses precision beyond this.
inline constexpr int kMaxNakagamiShape = 20;

}  // namespace mmwcov::propagation

#endif  // MMWCOV_PROPAGATION_HPP
