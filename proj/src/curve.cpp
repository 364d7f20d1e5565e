/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "mmwcov/curve.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace mmwcov {

const char* curve_kind_name(CurveKind kind) {
    switch (kind) {
        case CurveKind::sinr: return "SINR";
        case CurveKind::snr: return "SNR";
        case CurveKind::sir: return "SIR";
        case CurveKind::inr: return "INR";
        case CurveKind::rate: return "RATE";
    }
    return "?";
}

CurveKind curve_kind_from_name(const std::string& name) {
    if (name == "SINR" || name == "sinr") return CurveKind::sinr;
    if (name == "SNR" || name == "snr") return CurveKind::snr;
    if (name == "SIR" || name == "sir") return CurveKind::sir;
    if (name == "INR" || name == "inr") return CurveKind::inr;
    if (name == "RATE" || name == "rate") return CurveKind::rate;
    throw std::invalid_argument("unknown curve kind: " + name);
}

void CoverageCurve::check_invariants(double tolerance) const {
    double prev_thr = -1e300;
    double prev_prob = 1.0 + tolerance;
    for (const auto& p : points) {
        if (!(p.threshold > prev_thr))
            throw std::logic_error("curve thresholds must be strictly increasing");
        if (p.probability < -tolerance || p.probability > 1.0 + tolerance)
            throw std::logic_error("curve probability outside [0, 1]");
        if (p.probability > prev_prob + tolerance)
            throw std::logic_error("CCDF must be non-increasing");
        prev_thr = p.threshold;
        prev_prob = p.probability;
    }
}

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}
}  // namespace

std::string CoverageCurve::to_csv(const std::string& manifest_ref) const {
    const bool with_ci = !points.empty() && points.front().ci99_halfwidth.has_value();
    std::string out = "# manifest=" + manifest_ref + " config=" + fingerprint + "\n";
    out += with_ci ? "kind,threshold,probability,ci99_halfwidth\n"
                   : "kind,threshold,probability\n";
    for (const auto& p : points) {
        out += curve_kind_name(kind);
        out += ',';
        out += fmt(p.threshold);
        out += ',';
        out += fmt(p.probability);
        if (with_ci) {
            out += ',';
            out += fmt(p.ci99_halfwidth.value_or(0.0));
        }
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << contents;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace mmwcov
