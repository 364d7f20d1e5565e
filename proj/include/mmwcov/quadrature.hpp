/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MMWCOV_QUADRATURE_HPP
#define MMWCOV_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "mmwcov/common.hpp"

namespace mmwcov {

/// Tolerances controlling every numeric integral in the analytic pipeline.
struct Quadrature {
    double rel_tol = 1e-6;
    double abs_tol = 1e-9;
    /// Improper integrals are truncated once the integrand falls below
    /// tail_cutoff times its running maximum (doubling-interval search).
    double tail_cutoff = 1e-10;
    std::size_t max_intervals = 4000;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule, positive abscissae.
inline constexpr double kGk15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
inline constexpr double kGk15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kG7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double value = 0.0;
    double error = 0.0;
    double max_abs = 0.0;
};

template <typename F>
PanelResult gk15(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double kron = 0.0;
    double gauss = 0.0;
    double max_abs = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double dx = half * kGk15Nodes[i];
        const double f1 = f(center - dx);
        const double f2 = (i == 7) ? 0.0 : f(center + dx);
        const double fsum = (i == 7) ? f1 : f1 + f2;
        kron += kGk15Weights[i] * fsum;
        if (i % 2 == 1) gauss += kG7Weights[i / 2] * fsum;
        max_abs = std::max({max_abs, std::abs(f1), std::abs(f2)});
    }
    PanelResult r;
    r.value = kron * half;
    r.max_abs = max_abs;
    const double diff = std::abs(kron - gauss) * std::abs(half);
    // QUADPACK-style sharpened estimate; safe-guarded by the adaptive loop.
    r.error = diff > 0.0 ? std::min(diff, std::pow(200.0 * diff, 1.5)) : 0.0;
    return r;
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of f over [a, b].
/// Throws NumericError tagged with `name` if tolerances cannot be met.
template <typename F>
double integrate(const F& f, double a, double b, const Quadrature& quad,
                 const std::string& name, double* max_abs_out = nullptr) {
    if (!(b > a)) {
        if (max_abs_out) *max_abs_out = 0.0;
        return 0.0;
    }
    struct Interval {
        double a, b, value, error;
    };
    std::vector<Interval> intervals;
    auto panel = detail::gk15(f, a, b);
    double max_abs = panel.max_abs;
    intervals.push_back({a, b, panel.value, panel.error});
    double total = panel.value;
    double total_err = panel.error;

    while (total_err > std::max(quad.abs_tol, quad.rel_tol * std::abs(total))) {
        if (intervals.size() >= quad.max_intervals)
            throw NumericError("quadrature failed to converge", name);
        std::size_t worst = 0;
        for (std::size_t i = 1; i < intervals.size(); ++i)
            if (intervals[i].error > intervals[worst].error) worst = i;
        const Interval cur = intervals[worst];
        const double mid = 0.5 * (cur.a + cur.b);
        if (mid <= cur.a || mid >= cur.b)
            throw NumericError("quadrature interval collapsed", name);
        auto left = detail::gk15(f, cur.a, mid);
        auto right = detail::gk15(f, mid, cur.b);
        max_abs = std::max({max_abs, left.max_abs, right.max_abs});
        total += left.value + right.value - cur.value;
        total_err += left.error + right.error - cur.error;
        intervals[worst] = {cur.a, mid, left.value, left.error};
        intervals.push_back({mid, cur.b, right.value, right.error});
    }
    if (max_abs_out) *max_abs_out = max_abs;
    return total;
}

/// Integration of f over [a, b] where b may be +inf. Segments of doubling
/// width are appended until b is reached, the integrand drops below
/// tail_cutoff times its running maximum, or the segment contribution is
/// negligible relative to the accumulated value. Segmenting also keeps
/// narrowly-supported integrands visible on very wide domains.
template <typename F>
double integrate_tail(const F& f, double a, double b, double scale, const Quadrature& quad,
                      const std::string& name) {
    if (!(b > a)) return 0.0;
    if (!(scale > 0.0)) scale = 1.0;
    double total = 0.0;
    double lo = a;
    double width = scale;
    double global_max = 0.0;
    int zero_streak = 0;
    for (int k = 0; k < 80; ++k) {
        const double hi = std::min(lo + width, b);
        double seg_max = 0.0;
        const double seg = integrate(f, lo, hi, quad, name, &seg_max);
        total += seg;
        if (hi >= b) return total;
        global_max = std::max(global_max, seg_max);
        if (seg == 0.0 && seg_max == 0.0) {
            if (++zero_streak >= 6) return total;
        } else {
            zero_streak = 0;
        }
        if (k >= 1 && global_max > 0.0 && seg_max < quad.tail_cutoff * global_max)
            return total;
        if (std::abs(seg) > 0.0 &&
            std::abs(seg) <= quad.rel_tol * std::max(std::abs(total), quad.abs_tol))
            return total;
        lo = hi;
        width *= 2.0;
    }
    throw NumericError("improper integral tail did not decay", name);
}

/// Integration of f over [a, inf).
template <typename F>
double integrate_upper(const F& f, double a, double scale, const Quadrature& quad,
                       const std::string& name) {
    return integrate_tail(f, a, std::numeric_limits<double>::infinity(), scale, quad, name);
}

}  // namespace mmwcov

#endif  // MMWCOV_QUADRATURE_HPP
