/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "mmwcov/propagation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "mmwcov/common.hpp"
#include "mmwcov/quadrature.hpp"

namespace mmwcov::propagation {

void validate(const PathLossParams& p) {
    if (!(p.c_los > 0.0 && p.c_nlos > 0.0))
        throw std::invalid_argument("pathloss: intercepts must be > 0");
    if (!(p.alpha_los >= 1.0 && p.alpha_nlos >= 1.0))
        throw std::invalid_argument("pathloss: exponents must be >= 1");
    if (p.alpha_nlos < p.alpha_los)
        throw std::invalid_argument("pathloss: alpha_nlos must be >= alpha_los");
}

double path_loss(const PathLossParams& p, double d, LinkState state) {
    if (d <= 0.0) throw std::domain_error("path_loss: distance must be > 0");
    if (state == LinkState::los) return p.c_los * std::pow(d, -p.alpha_los);
    return p.c_nlos * std::pow(d, -p.alpha_nlos);
}

void validate(const AntennaPattern& p) {
    if (!(p.side_gain > 0.0) || p.main_gain < p.side_gain)
        throw std::invalid_argument("antenna: need main_gain >= side_gain > 0");
    if (!(p.beamwidth > 0.0 && p.beamwidth <= 2.0 * kPi))
        throw std::invalid_argument("antenna: beamwidth must be in (0, 2pi]");
}

GainPmf gain_pmf(const AntennaPattern& bs, const AntennaPattern& ms) {
    validate(bs);
    validate(ms);
    const double c_bs = bs.beamwidth / (2.0 * kPi);
    const double c_ms = ms.beamwidth / (2.0 * kPi);
    GainPmf pmf;
    pmf.gains = {ms.main_gain * bs.main_gain, ms.main_gain * bs.side_gain,
                 ms.side_gain * bs.main_gain, ms.side_gain * bs.side_gain};
    pmf.probs = {c_ms * c_bs, c_ms * (1.0 - c_bs), (1.0 - c_ms) * c_bs,
                 (1.0 - c_ms) * (1.0 - c_bs)};
    pmf.serving_gain = bs.main_gain * ms.main_gain;
    return pmf;
}

void validate(const FadingParams& f) {
    if (f.nu_los < 1 || f.nu_nlos < 1)
        throw std::invalid_argument("fading: Nakagami shapes must be integers >= 1");
}

double sample_nakagami(int nu, Xoshiro256pp& rng) {
    if (nu < 1) throw std::domain_error("sample_nakagami: nu must be >= 1");
    std::gamma_distribution<double> gamma(static_cast<double>(nu), 1.0 / nu);
    return gamma(rng);
}

double ula_gain(int n_antennas, double spacing_wavelengths, double steer, double actual) {
    if (n_antennas < 1) throw std::domain_error("ula_gain: need at least one antenna");
    if (n_antennas == 1) return 1.0;
    const double delta = 2.0 * kPi * spacing_wavelengths * (std::sin(steer) - std::sin(actual));
    const double half = 0.5 * delta;
    const double denom = std::sin(half);
    const double n = static_cast<double>(n_antennas);
    if (std::abs(denom) < 1e-12) return n;
    const double num = std::sin(n * half);
    const double ratio = num / denom;
    return ratio * ratio / n;
}

AntennaPattern sectored_fit(int n_antennas, double spacing_wavelengths) {
    if (n_antennas < 2) throw std::domain_error("sectored_fit: need at least two antennas");
    const double n = static_cast<double>(n_antennas);
    auto gain = [&](double phi) { return ula_gain(n_antennas, spacing_wavelengths, 0.0, phi); };

    // Half-power point: first crossing of n/2 when marching off boresight.
    const double target = 0.5 * n;
    double lo = 0.0;
    double hi = 0.0;
    const double step = kPi / 4096.0;
    for (double phi = step; phi <= 0.5 * kPi; phi += step) {
        if (gain(phi) <= target) {
            hi = phi;
            lo = phi - step;
            break;
        }
    }
    if (hi == 0.0) throw NumericError("no half-power crossing found", "sectored_fit");
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (gain(mid) > target ? lo : hi) = mid;
    }
    const double beamwidth = lo + hi;  // twice the half-power angle

    // Side lobe chosen so the step pattern radiates the same total power
    // over [-pi, pi] as the exact array pattern.
    const Quadrature quad{1e-9, 1e-12, 1e-12, 20000};
    double total = 0.0;
    const int panels = 8 * n_antennas;
    for (int i = 0; i < panels; ++i) {
        const double a = -kPi + 2.0 * kPi * i / panels;
        const double b = -kPi + 2.0 * kPi * (i + 1) / panels;
        total += integrate(gain, a, b, quad, "sectored_fit power integral");
    }
    const double side = (total - n * beamwidth) / (2.0 * kPi - beamwidth);

    AntennaPattern p;
    p.main_gain = n;
    p.side_gain = std::max(side, 1e-12);
    p.beamwidth = beamwidth;
    validate(p);
    return p;
}

double alzer_eta(int nu) {
    if (nu < 1) throw std::domain_error("alzer_eta: nu must be >= 1");
    return nu * std::exp(-std::lgamma(nu + 1.0) / nu);
}

double alzer_ccdf_bound(int nu, double gamma) {
    if (nu < 1) throw std::domain_error("alzer_ccdf_bound: nu must be >= 1");
    if (!(gamma > 0.0)) throw std::domain_error("alzer_ccdf_bound: gamma must be > 0");
    const double eta = alzer_eta(nu);
    // 1 - (1 - e^{-eta gamma})^nu, the compensated form of the alternating sum.
    const double one_minus = -std::expm1(-eta * gamma);
    return 1.0 - std::pow(one_minus, nu);
}

}  // namespace mmwcov::propagation
