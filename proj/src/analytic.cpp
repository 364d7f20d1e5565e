/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "mmwcov/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <memory>
#include <stdexcept>

#include "mmwcov/common.hpp"
#include "mmwcov/parallel.hpp"

namespace mmwcov::analytic {

using propagation::GainPmf;

void validate(const NetworkConfig& cfg) {
    if (!(cfg.bs_density > 0.0)) throw std::invalid_argument("network: bs_density must be > 0");
    if (!(cfg.user_density > 0.0))
        throw std::invalid_argument("network: user_density must be > 0");
    if (cfg.noise_power < 0.0) throw std::invalid_argument("network: noise_power must be >= 0");
    if (!(cfg.bandwidth_hz > 0.0)) throw std::invalid_argument("network: bandwidth must be > 0");
    blockage::validate(cfg.los_model);
    propagation::validate(cfg.pathloss);
    propagation::validate(cfg.bs_pattern);
    propagation::validate(cfg.ms_pattern);
    propagation::validate(cfg.fading);
}

namespace {

// Fast path for the ubiquitous distance powers.
inline double pow_alpha(double base, double alpha) {
    if (alpha == 2.0) return base * base;
    if (alpha == 4.0) {
        const double b2 = base * base;
        return b2 * b2;
    }
    return std::pow(base, alpha);
}

std::vector<double> binomial_row(int nu) {
    std::vector<double> row(nu + 1, 0.0);
    row[0] = 1.0;
    for (int n = 1; n <= nu; ++n) row[n] = row[n - 1] * (nu - n + 1) / n;
    return row;
}

/// Shared evaluation state for the association and coverage
/// integrals under a fixed config.
class Kernel {
public:
    Kernel(NetworkConfig cfg, Quadrature quad) : cfg_(std::move(cfg)), quad_(quad) {
        validate(cfg_);
        if (cfg_.fading.nu_los > propagation::kMaxNakagamiShape ||
            cfg_.fading.nu_nlos > propagation::kMaxNakagamiShape)
            throw std::invalid_argument(
                "analytic: Nakagami shape above 20 is not supported (alternating sum)");
        lambda_ = cfg_.bs_density;
        two_pi_lambda_ = 2.0 * kPi * lambda_;
        pmf_ = propagation::gain_pmf(cfg_.bs_pattern, cfg_.ms_pattern);
        g0_ = pmf_.serving_gain;
        for (int k = 0; k < 4; ++k) {
            abar_[k] = pmf_.gains[k] / g0_;
            bprob_[k] = pmf_.probs[k];
        }
        eta_los_ = propagation::alzer_eta(cfg_.fading.nu_los);
        eta_nlos_ = propagation::alzer_eta(cfg_.fading.nu_nlos);
        binom_los_ = binomial_row(cfg_.fading.nu_los);
        binom_nlos_ = binomial_row(cfg_.fading.nu_nlos);
        x_scale_ = 2.0 / std::sqrt(kPi * lambda_);
        los_max_ = blockage::los_support_max(cfg_.los_model);
    }

    const NetworkConfig& cfg() const { return cfg_; }

    double p_los(double d) const { return blockage::p_los(cfg_.los_model, d); }

    // Mean number of LOS / NLOS points within distance x of the origin.
    double mass_los(double x) const {
        return two_pi_lambda_ * blockage::p_los_radial_integral(cfg_.los_model, x);
    }
    double mass_nlos(double x) const { return kPi * lambda_ * x * x - mass_los(x); }

    // Exclusion radii of the minimum-path-loss association: an NLOS point
    // closer than excl_nlos(x) would beat a LOS serving link of length x.
    // With equal intercepts these reduce to x^(aL/aN) and x^(aN/aL).
    double excl_nlos(double x) const {
        const auto& pl = cfg_.pathloss;
        return std::pow(pl.c_nlos / pl.c_los * std::pow(x, pl.alpha_los), 1.0 / pl.alpha_nlos);
    }
    double excl_los(double x) const {
        const auto& pl = cfg_.pathloss;
        return std::pow(pl.c_los / pl.c_nlos * std::pow(x, pl.alpha_nlos), 1.0 / pl.alpha_los);
    }

    // Unnormalized serving-distance densities, i.e. A_s * f_s(x). The
    // nearest point of an inhomogeneous Poisson process with radial
    // intensity lambda P(r) has density 2 pi lambda x P(x) e^{-mass(x)};
    // the second exponential removes realizations where the other tier
    // wins the path loss comparison.
    double weight_los(double x) const {
        if (x <= 0.0) return 0.0;
        const double p = p_los(x);
        if (p == 0.0) return 0.0;
        return two_pi_lambda_ * x * p * std::exp(-mass_los(x) - mass_nlos(excl_nlos(x)));
    }
    double weight_nlos(double x) const {
        if (x <= 0.0) return 0.0;
        const double q = 1.0 - p_los(x);
        if (q == 0.0) return 0.0;
        return two_pi_lambda_ * x * q * std::exp(-mass_nlos(x) - mass_los(excl_los(x)));
    }

    double a_los() const {
        auto f = [this](double x) { return weight_los(x); };
        return integrate_tail(f, 0.0, los_max_, x_scale_, quad_, "association A_L");
    }
    double a_nlos() const {
        auto f = [this](double x) { return weight_nlos(x); };
        return integrate_upper(f, 0.0, x_scale_, quad_, "association A_N");
    }

    /// Laplace-functional exponent contributed by one interferer tier:
    /// 2 pi lambda sum_k b_k int F(nu_i, coef abar_k / (nu_i t^alpha_i)) w(t) t dt
    double tier_exponent(double coef, int nu_i, double alpha_i, double lower, bool los_tier,
                         const char* name) const {
        const double nu = static_cast<double>(nu_i);
        auto integrand = [&](double t) {
            const double talpha = pow_alpha(t, alpha_i);
            double s = 0.0;
            for (int k = 0; k < 4; ++k) {
                if (bprob_[k] == 0.0) continue;
                const double y = coef * abar_[k] / (nu * talpha);
                // 1 - (1 + y)^{-nu}, stable for y near 0
                s += bprob_[k] * (-std::expm1(-nu * std::log1p(y)));
            }
            const double p = p_los(t);
            return s * (los_tier ? p : (1.0 - p)) * t;
        };
        const double upper = los_tier ? los_max_ : std::numeric_limits<double>::infinity();
        const double scale = std::max(x_scale_, lower);
        return two_pi_lambda_ * integrate_tail(integrand, lower, upper, scale, quad_, name);
    }

    /// Coverage probability at a linear threshold. Interference terms are
    /// omitted for SNR curves; sigma2 overrides the config noise power.
    double coverage_point(double t_lin, bool with_interference, double sigma2) const {
        if (!(t_lin > 0.0)) return 1.0;
        const auto& pl = cfg_.pathloss;
        double total = 0.0;

        // Serving LOS branch.
        const int nu_l = cfg_.fading.nu_los;
        for (int n = 1; n <= nu_l; ++n) {
            const double sign = (n % 2 == 1) ? 1.0 : -1.0;
            auto outer = [&](double x) {
                const double w = weight_los(x);
                if (w == 0.0) return 0.0;
                const double xal = pow_alpha(x, pl.alpha_los);
                double arg = -n * eta_los_ * xal * t_lin * sigma2 / (pl.c_los * g0_);
                if (w * std::exp(arg) < 1e-18) return 0.0;  // interference only shrinks it
                if (with_interference) {
                    const double coef = n * eta_los_ * t_lin * xal;
                    arg -= tier_exponent(coef, nu_l, pl.alpha_los, x, true,
                                         "coverage interference Q_n");
                    arg -= tier_exponent(coef * pl.c_nlos / pl.c_los, cfg_.fading.nu_nlos,
                                         pl.alpha_nlos, excl_nlos(x), false,
                                         "coverage interference V_n");
                }
                return w * std::exp(arg);
            };
            const double term = integrate_tail(outer, 0.0, los_max_, x_scale_, quad_,
                                               "coverage outer integral (LOS)");
            total += sign * binom_los_[n] * term;
        }

        // Serving NLOS branch.
        const int nu_n = cfg_.fading.nu_nlos;
        for (int n = 1; n <= nu_n; ++n) {
            const double sign = (n % 2 == 1) ? 1.0 : -1.0;
            auto outer = [&](double x) {
                const double w = weight_nlos(x);
                if (w == 0.0) return 0.0;
                const double xan = pow_alpha(x, pl.alpha_nlos);
                double arg = -n * eta_nlos_ * xan * t_lin * sigma2 / (pl.c_nlos * g0_);
                if (w * std::exp(arg) < 1e-18) return 0.0;  // interference only shrinks it
                if (with_interference) {
                    const double coef = n * eta_nlos_ * t_lin * xan;
                    arg -= tier_exponent(coef * pl.c_los / pl.c_nlos, nu_l, pl.alpha_los,
                                         excl_los(x), true, "coverage interference W_n");
                    arg -= tier_exponent(coef, nu_n, pl.alpha_nlos, x, false,
                                         "coverage interference Z_n");
                }
                return w * std::exp(arg);
            };
            const double term = integrate_upper(outer, 0.0, x_scale_, quad_,
                                                "coverage outer integral (NLOS)");
            total += sign * binom_nlos_[n] * term;
        }
        return std::clamp(total, 0.0, 1.0);
    }

private:
    NetworkConfig cfg_;
    Quadrature quad_;
    double lambda_ = 0.0;
    double two_pi_lambda_ = 0.0;
    GainPmf pmf_;
    double g0_ = 1.0;
    std::array<double, 4> abar_{};
    std::array<double, 4> bprob_{};
    double eta_los_ = 1.0;
    double eta_nlos_ = 1.0;
    std::vector<double> binom_los_;
    std::vector<double> binom_nlos_;
    double x_scale_ = 1.0;
    double los_max_ = 0.0;
};

void require_increasing(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw std::invalid_argument(std::string(what) + ": empty threshold list");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1]))
            throw std::invalid_argument(std::string(what) +
                                        ": thresholds must be strictly increasing");
}

void enforce_ccdf(CoverageCurve& curve) {
    double prev = 1.0;
    for (auto& p : curve.points) {
        p.probability = std::min(p.probability, prev);
        prev = p.probability;
    }
}

CoverageCurve coverage_curve(const NetworkConfig& cfg, const std::vector<double>& thresholds_db,
                             const Quadrature& quad, CurveKind kind, bool with_interference,
                             bool zero_noise, int threads) {
    require_increasing(thresholds_db, "coverage");
    const Kernel kernel(cfg, quad);
    const double sigma2 = zero_noise ? 0.0 : cfg.noise_power;
    std::vector<double> probs(thresholds_db.size(), 0.0);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    parallel_for(static_cast<long>(thresholds_db.size()), threads, [&](int, long i) {
        try {
            probs[i] = kernel.coverage_point(db_to_linear(thresholds_db[i]), with_interference,
                                             sigma2);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);
    CoverageCurve curve;
    curve.kind = kind;
    curve.points.reserve(thresholds_db.size());
    for (std::size_t i = 0; i < thresholds_db.size(); ++i)
        curve.points.push_back({thresholds_db[i], probs[i], std::nullopt});
    enforce_ccdf(curve);
    return curve;
}

}  // namespace

AssociationResult association(const NetworkConfig& cfg, const Quadrature& quad) {
    auto kernel = std::make_shared<Kernel>(cfg, quad);
    AssociationResult out;
    out.a_los = kernel->a_los();
    out.a_nlos = kernel->a_nlos();
    const double al = out.a_los;
    const double an = out.a_nlos;
    out.pdf_los = [kernel, al](double x) {
        if (x < 0.0) throw std::domain_error("pdf_los: distance must be >= 0");
        return al > 1e-300 ? kernel->weight_los(x) / al : 0.0;
    };
    out.pdf_nlos = [kernel, an](double x) {
        if (x < 0.0) throw std::domain_error("pdf_nlos: distance must be >= 0");
        return an > 1e-300 ? kernel->weight_nlos(x) / an : 0.0;
    };
    return out;
}

CoverageCurve sinr_coverage(const NetworkConfig& cfg, const std::vector<double>& thresholds_db,
                            const Quadrature& quad, int threads) {
    return coverage_curve(cfg, thresholds_db, quad, CurveKind::sinr, true, false, threads);
}

CoverageCurve snr_coverage(const NetworkConfig& cfg, const std::vector<double>& thresholds_db,
                           const Quadrature& quad, int threads) {
    return coverage_curve(cfg, thresholds_db, quad, CurveKind::snr, false, false, threads);
}

CoverageCurve sir_coverage(const NetworkConfig& cfg, const std::vector<double>& thresholds_db,
                           const Quadrature& quad, int threads) {
    return coverage_curve(cfg, thresholds_db, quad, CurveKind::sir, true, true, threads);
}

double load_pmf(double ratio, CellKind cell, int n) {
    if (!(ratio > 0.0)) throw std::domain_error("load_pmf: ratio must be > 0");
    if (n < 0) throw std::domain_error("load_pmf: n must be >= 0");
    constexpr double shape = 3.5;
    const double log_shape_term = shape * std::log(shape) - std::lgamma(shape);
    if (cell == CellKind::serving) {
        if (n == 0) return 0.0;
        const double logp = log_shape_term + std::lgamma(n + shape) -
                            std::lgamma(static_cast<double>(n)) +
                            (n - 1) * std::log(ratio) - (n + shape) * std::log(shape + ratio);
        return std::exp(logp);
    }
    const double logp = log_shape_term + std::lgamma(n + shape) - std::lgamma(n + 1.0) +
                        n * std::log(ratio) - (n + shape) * std::log(shape + ratio);
    return std::exp(logp);
}

int default_rate_n_max(double ratio) {
    return static_cast<int>(std::ceil(10.0 * (1.0 + ratio)));
}

namespace {

CoverageCurve rate_curve_from_loads(const NetworkConfig& cfg, const std::vector<double>& tau_bps,
                                    const Quadrature& quad, const std::vector<double>& weights,
                                    const std::vector<int>& loads, double tail_mass,
                                    int threads) {
    require_increasing(tau_bps, "rate");
    if (!tau_bps.empty() && tau_bps.front() < 0.0)
        throw std::invalid_argument("rate: thresholds must be >= 0 bps");
    const Kernel kernel(cfg, quad);

    // Collect the distinct SINR thresholds the mixture needs, evaluate them
    // in parallel, then assemble deterministically.
    std::map<double, double> values;
    for (const double tau : tau_bps) {
        for (const int n : loads) {
            const double exponent = tau * n / cfg.bandwidth_hz;
            if (exponent > 1000.0) continue;
            values.emplace(std::exp2(exponent) - 1.0, 0.0);
        }
    }
    std::vector<std::pair<const double, double>*> slots;
    slots.reserve(values.size());
    for (auto& kv : values) slots.push_back(&kv);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    parallel_for(static_cast<long>(slots.size()), threads, [&](int, long i) {
        try {
            slots[i]->second = kernel.coverage_point(slots[i]->first, true, cfg.noise_power);
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);

    CoverageCurve curve;
    curve.kind = CurveKind::rate;
    for (const double tau : tau_bps) {
        double r = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            const double exponent = tau * loads[i] / cfg.bandwidth_hz;
            if (exponent > 1000.0) continue;  // SINR threshold astronomically high
            r += weights[i] * values.at(std::exp2(exponent) - 1.0);
        }
        curve.points.push_back({tau, std::clamp(r, 0.0, 1.0), std::nullopt});
    }
    enforce_ccdf(curve);
    if (tail_mass > 1e-3)
        curve.warnings.push_back("truncated load tail mass " + std::to_string(tail_mass));
    return curve;
}

}  // namespace

CoverageCurve rate_coverage(const NetworkConfig& cfg, const std::vector<double>& tau_bps,
                            const Quadrature& quad, int n_max, int threads) {
    validate(cfg);
    const double ratio = cfg.user_density / cfg.bs_density;
    if (n_max <= 0) n_max = default_rate_n_max(ratio);
    std::vector<double> weights;
    std::vector<int> loads;
    double total = 0.0;
    for (int n = 1; n <= n_max; ++n) {
        const double w = load_pmf(ratio, CellKind::serving, n);
        weights.push_back(w);
        loads.push_back(n);
        total += w;
    }
    const double tail_mass = std::max(0.0, 1.0 - total);
    for (auto& w : weights) w /= total;  // tau = 0 then maps to exactly 1
    return rate_curve_from_loads(cfg, tau_bps, quad, weights, loads, tail_mass, threads);
}

CoverageCurve rate_coverage_mean_load(const NetworkConfig& cfg, const std::vector<double>& tau_bps,
                                      const Quadrature& quad, int threads) {
    validate(cfg);
    const double ratio = cfg.user_density / cfg.bs_density;
    require_increasing(tau_bps, "rate");
    const Kernel kernel(cfg, quad);
    const double mean_load = 1.0 + 1.28 * ratio;
    std::vector<double> probs(tau_bps.size(), 0.0);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    parallel_for(static_cast<long>(tau_bps.size()), threads, [&](int, long i) {
        try {
            const double exponent = tau_bps[i] * mean_load / cfg.bandwidth_hz;
            probs[i] = exponent <= 1000.0
                           ? kernel.coverage_point(std::exp2(exponent) - 1.0, true,
                                                   cfg.noise_power)
                           : 0.0;
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    });
    if (failure) std::rethrow_exception(failure);
    CoverageCurve curve;
    curve.kind = CurveKind::rate;
    for (std::size_t i = 0; i < tau_bps.size(); ++i)
        curve.points.push_back({tau_bps[i], std::clamp(probs[i], 0.0, 1.0), std::nullopt});
    enforce_ccdf(curve);
    return curve;
}

UplinkDensities uplink_densities(const NetworkConfig& cfg, double r) {
    validate(cfg);
    if (r < 0.0) throw std::domain_error("uplink_densities: r must be >= 0");
    const auto& pl = cfg.pathloss;
    const double lambda_b = cfg.bs_density;
    // Q(y): probability that the serving link's path loss beats 1/y, via the
    // void probability of the joint LOS/NLOS process.
    auto q_of = [&](double y) {
        if (!(y > 0.0)) return 0.0;
        const double r_nlos = std::pow(y * pl.c_nlos, 1.0 / pl.alpha_nlos);
        const double r_los = std::pow(y * pl.c_los, 1.0 / pl.alpha_los);
        const double i_los = blockage::p_los_radial_integral(cfg.los_model, r_los);
        const double i_nlos_weighted =
            0.5 * r_nlos * r_nlos - blockage::p_los_radial_integral(cfg.los_model, r_nlos);
        const double mass = 2.0 * kPi * lambda_b * (i_nlos_weighted + i_los);
        return -std::expm1(-mass);
    };
    const double p = blockage::p_los(cfg.los_model, r);
    UplinkDensities out;
    if (r == 0.0) return out;
    out.lambda_los = lambda_b * p * q_of(std::pow(r, pl.alpha_los) / pl.c_los);
    out.lambda_nlos = lambda_b * (1.0 - p) * q_of(std::pow(r, pl.alpha_nlos) / pl.c_nlos);
    return out;
}

CoverageCurve hetnet_rate(double a_mmw, const CoverageCurve& r_mmw, const CoverageCurve& r_uhf) {
    if (!(a_mmw >= 0.0 && a_mmw <= 1.0))
        throw std::invalid_argument("hetnet_rate: association probability must be in [0, 1]");
    if (r_mmw.points.size() != r_uhf.points.size())
        throw std::invalid_argument("hetnet_rate: curves must share a threshold grid");
    CoverageCurve out;
    out.kind = r_mmw.kind;
    out.fingerprint = r_mmw.fingerprint;
    for (std::size_t i = 0; i < r_mmw.points.size(); ++i) {
        const auto& a = r_mmw.points[i];
        const auto& b = r_uhf.points[i];
        if (std::abs(a.threshold - b.threshold) >
            1e-9 * std::max(1.0, std::abs(a.threshold)))
            throw std::invalid_argument("hetnet_rate: curves must share a threshold grid");
        out.points.push_back(
            {a.threshold, a_mmw * a.probability + (1.0 - a_mmw) * b.probability, std::nullopt});
    }
    return out;
}

}  // namespace mmwcov::analytic
