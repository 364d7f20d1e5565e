/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MMWCOV_COMMON_HPP
#define MMWCOV_COMMON_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace mmwcov {

inline constexpr const char* kVersion = "0.1.0";

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kThermalNoiseDbmHz = -174.0;

/// z-score of the two-sided 99% normal confidence interval.
inline constexpr double kZ99 = 2.5758293035489004;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

/// Free-space power gain at 1 m for a carrier wavelength, (lambda/4pi)^2.
inline double friis_intercept_1m(double carrier_hz) {
    const double lambda_c = kSpeedOfLight / carrier_hz;
    const double g = lambda_c / (4.0 * kPi);
    return g * g;
}

/// Average inter-site distance for a planar point density (per m^2).
inline double isd_from_density(double density) { return 2.0 / std::sqrt(kPi * density); }
inline double density_from_isd(double isd) { return 4.0 / (kPi * isd * isd); }

/// 99% Wilson score half-width for a binomial proportion; positive even at
/// p_hat in {0,1} so empirical CCDF endpoints keep a meaningful band.
inline double wilson99_halfwidth(double p_hat, double n) {
    const double z = kZ99;
    const double z2n = z * z / n;
    return z * std::sqrt(p_hat * (1.0 - p_hat) / n + z2n / (4.0 * n)) / (1.0 + z2n);
}

/// Raised when a numeric routine cannot reach its tolerance; carries the name
/// of the failing integral or fit so callers can report it.
class NumericError : public std::runtime_error {
public:
    NumericError(std::string what, std::string context)
        : std::runtime_error(what + " [" + context + "]"), context_(std::move(context)) {}
    const std::string& context() const noexcept { return context_; }

private:
    std::string context_;
};

/// Raised on malformed configuration input; message carries the field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mmwcov

#endif  // MMWCOV_COMMON_HPP
