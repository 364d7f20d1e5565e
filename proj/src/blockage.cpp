/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "mmwcov/blockage.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "mmwcov/common.hpp"

namespace mmwcov::blockage {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double table_value(const EmpiricalTable& t, double d) {
    if (d <= t.distances_m.front()) return t.probs.front();
    if (d >= t.distances_m.back()) return t.probs.back();
    const auto it = std::upper_bound(t.distances_m.begin(), t.distances_m.end(), d);
    const std::size_t i = static_cast<std::size_t>(it - t.distances_m.begin()) - 1;
    const double x0 = t.distances_m[i];
    const double x1 = t.distances_m[i + 1];
    const double w = (d - x0) / (x1 - x0);
    return t.probs[i] + w * (t.probs[i + 1] - t.probs[i]);
}

// Integral of (p0 + s (r - r0)) * r dr over [r0, r1].
double linear_segment_radial(double r0, double r1, double p0, double s) {
    const double c1 = p0 - s * r0;
    return c1 * 0.5 * (r1 * r1 - r0 * r0) + s * (r1 * r1 * r1 - r0 * r0 * r0) / 3.0;
}

}  // namespace

void validate(const LosModel& model) {
    std::visit(
        [](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ThreeGppUrban>) {
                require(m.a_m > 0.0, "blockage: a_m must be > 0");
                require(m.b_m > 0.0, "blockage: b_m must be > 0");
            } else if constexpr (std::is_same_v<T, SuburbanExp>) {
                require(m.c_m > 0.0, "blockage: c_m must be > 0");
            } else if constexpr (std::is_same_v<T, LosBall>) {
                require(m.radius_m > 0.0, "blockage: radius_m must be > 0");
            } else if constexpr (std::is_same_v<T, GeneralizedLosBall>) {
                require(m.radius_m > 0.0, "blockage: radius_m must be > 0");
                require(m.los_fraction >= 0.0 && m.los_fraction <= 1.0,
                        "blockage: los_fraction must be in [0, 1]");
            } else if constexpr (std::is_same_v<T, EmpiricalTable>) {
                require(!m.distances_m.empty(), "blockage: empty table");
                require(m.distances_m.size() == m.probs.size(),
                        "blockage: distances and probs must have equal length");
                for (std::size_t i = 0; i < m.distances_m.size(); ++i) {
                    require(std::isfinite(m.distances_m[i]) && m.distances_m[i] >= 0.0,
                            "blockage: table distances must be finite and >= 0");
                    require(m.probs[i] >= 0.0 && m.probs[i] <= 1.0,
                            "blockage: table probs must be in [0, 1]");
                    if (i > 0)
                        require(m.distances_m[i] > m.distances_m[i - 1],
                                "blockage: table distances must be strictly increasing");
                }
            }
        },
        model);
}

double p_los(const LosModel& model, double d) {
    if (d < 0.0) throw std::domain_error("p_los: distance must be >= 0");
    return std::visit(
        [d](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ThreeGppUrban>) {
                if (d == 0.0) return 1.0;
                const double e = std::exp(-d / m.b_m);
                return std::min(m.a_m / d, 1.0) * (1.0 - e) + e;
            } else if constexpr (std::is_same_v<T, SuburbanExp>) {
                return std::exp(-d / m.c_m);
            } else if constexpr (std::is_same_v<T, LosBall>) {
                return d < m.radius_m ? 1.0 : 0.0;
            } else if constexpr (std::is_same_v<T, GeneralizedLosBall>) {
                return d < m.radius_m ? m.los_fraction : 0.0;
            } else {
                return table_value(m, d);
            }
        },
        model);
}

double p_los_radial_integral(const LosModel& model, double x) {
    if (x < 0.0) throw std::domain_error("p_los_radial_integral: x must be >= 0");
    if (x == 0.0) return 0.0;
    return std::visit(
        [x](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, ThreeGppUrban>) {
                const double a = m.a_m;
                const double b = m.b_m;
                if (x <= a) return 0.5 * x * x;
                // For r > a the integrand is a (1 - e^{-r/b}) + r e^{-r/b}.
                const double ea = std::exp(-a / b);
                const double ex = std::exp(-x / b);
                double v = 0.5 * a * a + a * (x - a);
                v += -a * b * (ea - ex);
                v += b * (ea * (a + b) - ex * (x + b));
                return v;
            } else if constexpr (std::is_same_v<T, SuburbanExp>) {
                const double c = m.c_m;
                return c * c - c * std::exp(-x / c) * (x + c);
            } else if constexpr (std::is_same_v<T, LosBall>) {
                const double r = std::min(x, m.radius_m);
                return 0.5 * r * r;
            } else if constexpr (std::is_same_v<T, GeneralizedLosBall>) {
                const double r = std::min(x, m.radius_m);
                return 0.5 * m.los_fraction * r * r;
            } else {
                const auto& d = m.distances_m;
                const auto& p = m.probs;
                const double d0 = d.front();
                double acc = 0.5 * p.front() * std::min(x, d0) * std::min(x, d0);
                if (x <= d0) return acc;
                for (std::size_t i = 0; i + 1 < d.size(); ++i) {
                    if (x <= d[i]) break;
                    const double hi = std::min(x, d[i + 1]);
                    const double s = (p[i + 1] - p[i]) / (d[i + 1] - d[i]);
                    acc += linear_segment_radial(d[i], hi, p[i], s);
                }
                if (x > d.back()) acc += 0.5 * p.back() * (x * x - d.back() * d.back());
                return acc;
            }
        },
        model);
}

double los_support_max(const LosModel& model) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        [](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, LosBall>) {
                return m.radius_m;
            } else if constexpr (std::is_same_v<T, GeneralizedLosBall>) {
                return m.los_fraction > 0.0 ? m.radius_m : 0.0;
            } else if constexpr (std::is_same_v<T, EmpiricalTable>) {
                if (m.probs.back() > 0.0) return inf;
                std::size_t last = m.probs.size();
                while (last > 0 && m.probs[last - 1] == 0.0) --last;
                if (last == 0) return 0.0;
                return last < m.probs.size() ? m.distances_m[last] : inf;
            } else {
                return inf;
            }
        },
        model);
}

double rst_c(const BuildingStats& stats, RstMethod method) {
    if (stats.density_per_m2 <= 0.0 || stats.mean_perimeter_m <= 0.0)
        throw std::domain_error("rst_c: building density and mean perimeter must be > 0");
    if (method == RstMethod::perimeter)
        return kPi / (stats.density_per_m2 * stats.mean_perimeter_m);
    if (!(stats.covered_fraction > 0.0 && stats.covered_fraction < 1.0))
        throw std::domain_error("rst_c: area method needs covered fraction in (0, 1)");
    if (stats.mean_area_m2 <= 0.0)
        throw std::domain_error("rst_c: area method needs mean building area > 0");
    return -kPi * stats.mean_area_m2 /
           (std::log(1.0 - stats.covered_fraction) * stats.mean_perimeter_m);
}

double los_ball_radius(const BuildingStats& stats) {
    if (stats.density_per_m2 <= 0.0 || stats.mean_perimeter_m <= 0.0)
        throw std::domain_error("los_ball_radius: building density and mean perimeter must be > 0");
    return std::sqrt(2.0) * kPi / (stats.density_per_m2 * stats.mean_perimeter_m);
}

namespace {

double table_rms(const EmpiricalTable& t, const std::function<double(double)>& model) {
    double acc = 0.0;
    for (std::size_t i = 0; i < t.distances_m.size(); ++i) {
        const double r = model(t.distances_m[i]) - t.probs[i];
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(t.distances_m.size()));
}

struct NelderMeadResult {
    std::array<double, 2> x;
    double fx = 0.0;
    bool converged = false;
};

NelderMeadResult nelder_mead_2d(const std::function<double(double, double)>& f,
                                std::array<double, 2> start, std::array<double, 2> step,
                                int max_evals) {
    using Vertex = std::pair<std::array<double, 2>, double>;
    std::array<Vertex, 3> simplex;
    simplex[0] = {start, f(start[0], start[1])};
    simplex[1] = {{start[0] + step[0], start[1]}, 0.0};
    simplex[2] = {{start[0], start[1] + step[1]}, 0.0};
    simplex[1].second = f(simplex[1].first[0], simplex[1].first[1]);
    simplex[2].second = f(simplex[2].first[0], simplex[2].first[1]);
    int evals = 3;
    auto order = [&] {
        std::sort(simplex.begin(), simplex.end(),
                  [](const Vertex& a, const Vertex& b) { return a.second < b.second; });
    };
    order();
    while (evals < max_evals) {
        if (std::abs(simplex[2].second - simplex[0].second) < 1e-14 &&
            std::abs(simplex[2].first[0] - simplex[0].first[0]) +
                    std::abs(simplex[2].first[1] - simplex[0].first[1]) <
                1e-10)
            return {simplex[0].first, simplex[0].second, true};
        const std::array<double, 2> centroid = {
            0.5 * (simplex[0].first[0] + simplex[1].first[0]),
            0.5 * (simplex[0].first[1] + simplex[1].first[1])};
        auto at = [&](double t) -> std::array<double, 2> {
            return {centroid[0] + t * (centroid[0] - simplex[2].first[0]),
                    centroid[1] + t * (centroid[1] - simplex[2].first[1])};
        };
        const auto xr = at(1.0);
        const double fr = f(xr[0], xr[1]);
        ++evals;
        if (fr < simplex[0].second) {
            const auto xe = at(2.0);
            const double fe = f(xe[0], xe[1]);
            ++evals;
            simplex[2] = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
        } else if (fr < simplex[1].second) {
            simplex[2] = {xr, fr};
        } else {
            const auto xc = at(fr < simplex[2].second ? 0.5 : -0.5);
            const double fc = f(xc[0], xc[1]);
            ++evals;
            if (fc < std::min(fr, simplex[2].second)) {
                simplex[2] = {xc, fc};
            } else {
                for (int i = 1; i < 3; ++i) {
                    for (int k = 0; k < 2; ++k)
                        simplex[i].first[k] =
                            simplex[0].first[k] + 0.5 * (simplex[i].first[k] - simplex[0].first[k]);
                    simplex[i].second = f(simplex[i].first[0], simplex[i].first[1]);
                    ++evals;
                }
            }
        }
        order();
    }
    return {simplex[0].first, simplex[0].second, false};
}

}  // namespace

UrbanFit fit_3gpp_urban(const EmpiricalTable& table) {
    validate(LosModel{table});
    require(table.distances_m.size() >= 10, "fit_3gpp_urban: need at least 10 table points");
    require(table.distances_m.front() <= 10.0 && table.distances_m.back() >= 300.0,
            "fit_3gpp_urban: table must span at least [10 m, 300 m]");

    constexpr double a_max = 100.0;
    constexpr double b_max = 1000.0;
    auto objective = [&](double a, double b) {
        double penalty = 0.0;
        auto clamp = [&penalty](double v, double lo, double hi) {
            const double c = std::clamp(v, lo, hi);
            penalty += (v - c) * (v - c);
            return c;
        };
        const double ac = clamp(a, 1e-3, a_max);
        const double bc = clamp(b, 1e-3, b_max);
        const ThreeGppUrban m{ac, bc};
        return table_rms(table, [&m](double d) { return p_los(LosModel{m}, d); }) +
               penalty * 1e-3;
    };

    const std::array<std::array<double, 2>, 5> starts = {
        {{18.0, 63.0}, {7.0, 130.0}, {14.0, 64.0}, {45.0, 300.0}, {80.0, 700.0}}};
    NelderMeadResult best{{18.0, 63.0}, std::numeric_limits<double>::infinity(), false};
    bool any_converged = false;
    for (const auto& s : starts) {
        auto r = nelder_mead_2d(objective, s, {s[0] * 0.2, s[1] * 0.2}, 2000);
        any_converged = any_converged || r.converged;
        if (r.fx < best.fx) best = r;
    }
    UrbanFit fit;
    fit.model = ThreeGppUrban{std::clamp(best.x[0], 1e-3, a_max),
                              std::clamp(best.x[1], 1e-3, b_max)};
    fit.rmse_percent =
        100.0 * table_rms(table, [&fit](double d) { return p_los(LosModel{fit.model}, d); });
    fit.converged = any_converged;
    if (!any_converged) throw FitError("fit_3gpp_urban: optimizer did not converge", fit);
    return fit;
}

SuburbanFit fit_suburban_exp(const EmpiricalTable& table) {
    validate(LosModel{table});
    auto rms_at = [&](double c) {
        return table_rms(table, [c](double d) { return std::exp(-d / c); });
    };
    // Coarse log-spaced scan followed by golden-section refinement.
    double best_c = 1.0;
    double best_v = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 80; ++i) {
        const double c = std::pow(10.0, std::log10(1.0) + i * (std::log10(2e4) / 80.0));
        const double v = rms_at(c);
        if (v < best_v) {
            best_v = v;
            best_c = c;
        }
    }
    double lo = best_c / 2.0;
    double hi = best_c * 2.0;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = rms_at(x1);
    double f2 = rms_at(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-6 * hi; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = rms_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = rms_at(x2);
        }
    }
    const double c = 0.5 * (lo + hi);
    return SuburbanFit{SuburbanExp{c}, 100.0 * rms_at(c)};
}

}  // namespace mmwcov::blockage
