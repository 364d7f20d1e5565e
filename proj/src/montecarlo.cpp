/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "mmwcov/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "mmwcov/common.hpp"

namespace mmwcov::montecarlo {

using propagation::LinkState;

double effective_sim_radius(const SimConfig& cfg) {
    const double r500 = std::sqrt(500.0 / (kPi * cfg.network.bs_density));
    if (cfg.sim_radius_m <= 0.0) return std::max(2000.0, r500);
    return cfg.sim_radius_m;
}

void validate(const SimConfig& cfg) {
    analytic::validate(cfg.network);
    if (cfg.snapshots < 1) throw std::invalid_argument("sim: snapshots must be >= 1");
    if (!cfg.buildings && cfg.sim_radius_m > 0.0) {
        const double expected =
            kPi * cfg.sim_radius_m * cfg.sim_radius_m * cfg.network.bs_density;
        if (expected < 500.0)
            throw std::invalid_argument(
                "sim: radius too small, expected BS count must be >= 500");
    }
    if (cfg.shadowing &&
        (cfg.shadowing->sigma_los_db < 0.0 || cfg.shadowing->sigma_nlos_db < 0.0))
        throw std::invalid_argument("sim: shadowing sigmas must be >= 0 dB");
    if (cfg.buildings && cfg.rate_load == RateLoadMode::measured_cells)
        throw std::invalid_argument(
            "sim: measured-cells rate load requires statistical blocking");
}

namespace {

struct BsRec {
    double x = 0.0, y = 0.0;
    double dist = 0.0;
    bool los = false;
    double path_gain = 0.0;
    double gain = 1.0;
    double fading = 1.0;
};

struct SnapScalars {
    double signal = 0.0;
    double interference = 0.0;
    std::size_t serving = 0;
    long resamples = 0;
    int load = 1;
};

long draw_poisson(Xoshiro256pp& rng, double mean) {
    std::poisson_distribution<long> dist(mean);
    return dist(rng);
}

double draw_normal(Xoshiro256pp& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    return dist(rng);
}

struct Context {
    const SimConfig* cfg = nullptr;
    double radius = 0.0;
    double mean_count = 0.0;
    double sigma2 = 0.0;
    propagation::GainPmf pmf;
    std::array<double, 4> gain_cdf{};
    bool shadowing = false;
    double sigma_shadow_los = 0.0, sigma_shadow_nlos = 0.0;
    const geodata::BuildingSet* buildings = nullptr;
    geodata::Rect region{}, central{};
    double buildings_mean_count = 0.0;
    std::vector<double> load_cdf;  // serving-load inverse CDF (pmf rate mode)

    explicit Context(const SimConfig& c, bool with_rate_load) : cfg(&c) {
        validate(c);
        radius = effective_sim_radius(c);
        mean_count = kPi * radius * radius * c.network.bs_density;
        sigma2 = c.network.noise_power;
        pmf = propagation::gain_pmf(c.network.bs_pattern, c.network.ms_pattern);
        double acc = 0.0;
        for (int k = 0; k < 4; ++k) {
            acc += pmf.probs[k];
            gain_cdf[k] = acc;
        }
        gain_cdf[3] = 1.0 + 1e-12;
        if (c.shadowing) {
            shadowing = c.shadowing->sigma_los_db > 0.0 || c.shadowing->sigma_nlos_db > 0.0;
            sigma_shadow_los = c.shadowing->sigma_los_db;
            sigma_shadow_nlos = c.shadowing->sigma_nlos_db;
        }
        if (c.buildings) {
            buildings = c.buildings.get();
            region = buildings->region();
            const double qx = 0.25 * region.width();
            const double qy = 0.25 * region.height();
            central = geodata::Rect{region.xmin + qx, region.ymin + qy, region.xmax - qx,
                                    region.ymax - qy};
            buildings_mean_count = c.network.bs_density * region.area();
        }
        if (with_rate_load && c.rate_load == RateLoadMode::pmf) {
            const double ratio = c.network.user_density / c.network.bs_density;
            double cum = 0.0;
            for (int n = 1; n <= 2000000; ++n) {
                cum += analytic::load_pmf(ratio, analytic::CellKind::serving, n);
                load_cdf.push_back(cum);
                if (1.0 - cum < 1e-12) break;
            }
        }
    }

    double atom_gain(double u) const {
        for (int k = 0; k < 4; ++k)
            if (u <= gain_cdf[k]) return pmf.gains[k];
        return pmf.gains[3];
    }
};

/// Draws one network realization into `bs` and computes the SINR terms.
/// Pure function of (config, seed, stream_index).
void run_snapshot(const Context& ctx, std::uint64_t index, std::vector<BsRec>& bs,
                  SnapScalars& out, bool want_load) {
    const auto& net = ctx.cfg->network;
    Xoshiro256pp rng(ctx.cfg->seed, index);
    bs.clear();
    out = SnapScalars{};

    geodata::Point user{0.0, 0.0};
    if (ctx.buildings) user = ctx.buildings->sample_outdoor(ctx.central, rng);

    long n = 0;
    for (;;) {
        n = draw_poisson(rng, ctx.buildings ? ctx.buildings_mean_count : ctx.mean_count);
        if (n > 0) break;
        ++out.resamples;
    }

    std::size_t best = 0;
    double best_pg = -1.0;
    double best_dist = 0.0;
    for (long i = 0; i < n; ++i) {
        BsRec rec;
        if (ctx.buildings) {
            geodata::Point pos{};
            double d = 0.0;
            do {
                pos = ctx.buildings->sample_outdoor(ctx.region, rng);
                d = std::hypot(pos.x - user.x, pos.y - user.y);
            } while (d < propagation::kMinPathLossDistance);
            rec.x = pos.x;
            rec.y = pos.y;
            rec.dist = d;
            rec.los = !ctx.buildings->segment_blocked(user, pos);
        } else {
            double r = 0.0;
            do {
                r = ctx.radius * std::sqrt(rng.uniform());
            } while (r < propagation::kMinPathLossDistance);
            const double phi = 2.0 * kPi * rng.uniform();
            rec.x = r * std::cos(phi);
            rec.y = r * std::sin(phi);
            rec.dist = r;
            rec.los = rng.uniform() < blockage::p_los(net.los_model, r);
        }
        rec.path_gain = propagation::path_loss(net.pathloss, rec.dist,
                                               rec.los ? LinkState::los : LinkState::nlos);
        if (ctx.shadowing) {
            const double sigma = rec.los ? ctx.sigma_shadow_los : ctx.sigma_shadow_nlos;
            rec.path_gain *= db_to_linear(sigma * draw_normal(rng));
        }
        rec.gain = ctx.atom_gain(rng.uniform());
        rec.fading = propagation::sample_nakagami(
            rec.los ? net.fading.nu_los : net.fading.nu_nlos, rng);
        if (rec.path_gain > best_pg ||
            (rec.path_gain == best_pg && rec.dist < best_dist)) {
            best_pg = rec.path_gain;
            best_dist = rec.dist;
            best = static_cast<std::size_t>(i);
        }
        bs.push_back(rec);
    }

    bs[best].gain = ctx.pmf.serving_gain;
    out.serving = best;
    out.signal = bs[best].fading * bs[best].gain * bs[best].path_gain;
    double interference = 0.0;
    for (std::size_t i = 0; i < bs.size(); ++i) {
        if (i == best) continue;
        interference += bs[i].fading * bs[i].gain * bs[i].path_gain;
    }
    out.interference = interference;

    if (want_load) {
        if (ctx.cfg->rate_load == RateLoadMode::pmf) {
            const double u = rng.uniform();
            const auto it = std::lower_bound(ctx.load_cdf.begin(), ctx.load_cdf.end(), u);
            out.load = static_cast<int>(it - ctx.load_cdf.begin()) + 1;
        } else {
            // Measured cells: associate an explicit user process around the
            // serving BS by minimum path loss and count its members.
            const double sx = bs[best].x;
            const double sy = bs[best].y;
            const double cell_scale = 1.0 / std::sqrt(kPi * net.bs_density);
            const double capture = 4.0 * cell_scale;
            const long m = draw_poisson(rng, net.user_density * kPi * capture * capture);

            thread_local std::vector<std::pair<double, std::uint32_t>> order;
            order.clear();
            for (std::uint32_t i = 0; i < bs.size(); ++i)
                order.emplace_back(std::hypot(bs[i].x - sx, bs[i].y - sy), i);
            std::sort(order.begin(), order.end());

            const double c_best = std::max(net.pathloss.c_los, net.pathloss.c_nlos);
            int load = 1;
            for (long j = 0; j < m; ++j) {
                const double rr = capture * std::sqrt(rng.uniform());
                const double ph = 2.0 * kPi * rng.uniform();
                const double px = sx + rr * std::cos(ph);
                const double py = sy + rr * std::sin(ph);
                const double d_us = std::hypot(px - sx, py - sy);
                double g_star = -1.0;
                std::uint32_t best_i = 0;
                for (const auto& [d_si, i] : order) {
                    const double lb =
                        std::max(std::abs(d_si - d_us), propagation::kMinPathLossDistance);
                    if (!ctx.shadowing && d_si > d_us &&
                        c_best * std::pow(lb, -net.pathloss.alpha_los) <= g_star)
                        break;
                    const double d = std::max(std::hypot(bs[i].x - px, bs[i].y - py),
                                              propagation::kMinPathLossDistance);
                    const bool los = rng.uniform() < blockage::p_los(net.los_model, d);
                    double pg = propagation::path_loss(net.pathloss, d,
                                                       los ? LinkState::los : LinkState::nlos);
                    if (ctx.shadowing) {
                        const double sigma = los ? ctx.sigma_shadow_los : ctx.sigma_shadow_nlos;
                        pg *= db_to_linear(sigma * draw_normal(rng));
                    }
                    if (pg > g_star) {
                        g_star = pg;
                        best_i = i;
                    }
                }
                if (best_i == best) ++load;
            }
            out.load = load;
        }
    }
}

double snapshot_metric(const Context& ctx, const SnapScalars& s, CurveKind kind) {
    switch (kind) {
        case CurveKind::sinr: return s.signal / (ctx.sigma2 + s.interference);
        case CurveKind::snr: return s.signal / ctx.sigma2;
        case CurveKind::sir: return s.signal / s.interference;
        case CurveKind::inr: return s.interference / ctx.sigma2;
        case CurveKind::rate:
            return ctx.cfg->network.bandwidth_hz / s.load *
                   std::log2(1.0 + s.signal / (ctx.sigma2 + s.interference));
    }
    return 0.0;
}

}  // namespace

Snapshot sample_snapshot(const SimConfig& cfg, std::uint64_t stream_index) {
    const Context ctx(cfg, false);
    std::vector<BsRec> bs;
    SnapScalars s;
    run_snapshot(ctx, stream_index, bs, s, false);
    Snapshot snap;
    snap.resample_count = s.resamples;
    snap.sinr = s.signal / (ctx.cfg->network.noise_power + s.interference);
    snap.inr = ctx.cfg->network.noise_power > 0.0
                   ? s.interference / ctx.cfg->network.noise_power
                   : 0.0;
    for (std::size_t i = 0; i < bs.size(); ++i) {
        LinkSample link{bs[i].dist, bs[i].los, bs[i].gain, bs[i].fading, bs[i].path_gain};
        if (i == s.serving)
            snap.serving = link;
        else
            snap.interferers.push_back(link);
    }
    return snap;
}

namespace {

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Order-independent parallel reduction over snapshot indices: each thread
/// owns an integer count vector, sums are taken in thread order.
template <typename PerSnapshot>
void parallel_snapshots(long snapshots, int threads, const PerSnapshot& body) {
    const int t = std::min<long>(resolve_threads(threads), snapshots);
    std::vector<std::thread> pool;
    pool.reserve(t);
    for (int w = 0; w < t; ++w) {
        const long lo = snapshots * w / t;
        const long hi = snapshots * (w + 1) / t;
        pool.emplace_back([&body, w, lo, hi] {
            for (long i = lo; i < hi; ++i) body(w, static_cast<std::uint64_t>(i));
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace

CoverageCurve empirical_ccdf(const SimConfig& cfg, CurveKind kind,
                             const std::vector<double>& thresholds) {
    if (cfg.snapshots < 1000)
        throw std::invalid_argument("empirical_ccdf: need at least 1000 snapshots");
    if (thresholds.empty()) throw std::invalid_argument("empirical_ccdf: empty thresholds");
    for (std::size_t i = 1; i < thresholds.size(); ++i)
        if (!(thresholds[i] > thresholds[i - 1]))
            throw std::invalid_argument("empirical_ccdf: thresholds must be strictly increasing");
    if (cfg.network.noise_power <= 0.0 && (kind == CurveKind::snr || kind == CurveKind::inr))
        throw std::invalid_argument("empirical_ccdf: this kind needs noise_power > 0");

    const bool want_load = kind == CurveKind::rate;
    const Context ctx(cfg, want_load);
    std::vector<double> cuts(thresholds.size());
    for (std::size_t i = 0; i < thresholds.size(); ++i)
        cuts[i] = kind == CurveKind::rate ? thresholds[i] : db_to_linear(thresholds[i]);

    const int threads = resolve_threads(cfg.threads);
    std::vector<std::vector<long>> counts(threads, std::vector<long>(cuts.size(), 0));
    std::vector<long> resamples(threads, 0);

    parallel_snapshots(cfg.snapshots, threads, [&](int w, std::uint64_t index) {
        thread_local std::vector<BsRec> bs;
        SnapScalars s;
        run_snapshot(ctx, index, bs, s, want_load);
        resamples[w] += s.resamples;
        const double metric = snapshot_metric(ctx, s, kind);
        auto& c = counts[w];
        for (std::size_t k = 0; k < cuts.size(); ++k)
            if (metric > cuts[k]) ++c[k];
    });

    std::vector<long> total(cuts.size(), 0);
    long total_resamples = 0;
    for (int w = 0; w < threads; ++w) {
        total_resamples += resamples[w];
        for (std::size_t k = 0; k < cuts.size(); ++k) total[k] += counts[w][k];
    }

    CoverageCurve curve;
    curve.kind = kind;
    const double n = static_cast<double>(cfg.snapshots);
    for (std::size_t k = 0; k < cuts.size(); ++k) {
        const double p = static_cast<double>(total[k]) / n;
        curve.points.push_back({thresholds[k], p, wilson99_halfwidth(p, n)});
    }
    if (total_resamples > 0)
        curve.warnings.push_back(std::to_string(total_resamples) +
                                 " empty-network resamples");
    return curve;
}

std::string dump_snapshots(const SimConfig& cfg, long count) {
    std::string out;
    for (long i = 0; i < count; ++i) {
        const Snapshot snap = sample_snapshot(cfg, static_cast<std::uint64_t>(i));
        nlohmann::json j;
        j["index"] = i;
        j["resamples"] = snap.resample_count;
        j["sinr"] = snap.sinr;
        j["inr"] = snap.inr;
        auto link_json = [](const LinkSample& l) {
            return nlohmann::json{{"distance_m", l.distance},
                                  {"state", l.los ? "LOS" : "NLOS"},
                                  {"gain", l.gain},
                                  {"fading", l.fading},
                                  {"path_gain", l.path_gain}};
        };
        j["serving"] = link_json(snap.serving);
        auto& arr = j["interferers"] = nlohmann::json::array();
        for (const auto& l : snap.interferers) arr.push_back(link_json(l));
        out += j.dump();
        out += '\n';
    }
    return out;
}

std::vector<SweepPoint> density_sweep(const SimConfig& cfg, const std::vector<double>& densities,
                                      SweepMetric metric, double t_db) {
    if (densities.size() < 3)
        throw std::invalid_argument("density_sweep: need at least 3 densities");
    std::vector<SweepPoint> out;
    for (const double d : densities) {
        if (!(d > 0.0)) throw std::invalid_argument("density_sweep: densities must be > 0");
        SimConfig c = cfg;
        c.network.bs_density = d;
        c.sim_radius_m = 0.0;  // re-resolve for each density
        const CurveKind kind =
            metric == SweepMetric::coverage_at_t ? CurveKind::sinr : CurveKind::inr;
        const CoverageCurve curve = empirical_ccdf(c, kind, {t_db});
        out.push_back({d, isd_from_density(d), curve.points[0].probability,
                       curve.points[0].ci99_halfwidth.value_or(0.0)});
    }
    return out;
}

std::vector<double> measure_load(double bs_density, double user_density, long snapshots,
                                 std::uint64_t seed, int threads) {
    if (!(bs_density > 0.0 && user_density > 0.0))
        throw std::invalid_argument("measure_load: densities must be > 0");
    if (snapshots < 1) throw std::invalid_argument("measure_load: snapshots must be >= 1");

    const double window = std::sqrt(256.0 / bs_density);
    const int grid_n = 16;
    const double cell = window / grid_n;
    const int nthreads = resolve_threads(threads);
    std::vector<std::vector<long>> hists(nthreads);

    parallel_snapshots(snapshots, nthreads, [&](int w, std::uint64_t index) {
        Xoshiro256pp rng(seed, index);
        thread_local std::vector<double> bx, by;
        thread_local std::vector<std::vector<std::uint32_t>> buckets;
        bx.clear();
        by.clear();
        buckets.assign(static_cast<std::size_t>(grid_n) * grid_n, {});

        long nb = 0;
        while ((nb = draw_poisson(rng, bs_density * window * window)) == 0) {
        }
        for (long i = 0; i < nb; ++i) {
            const double x = rng.uniform() * window;
            const double y = rng.uniform() * window;
            bx.push_back(x);
            by.push_back(y);
            const int cx = std::min(grid_n - 1, static_cast<int>(x / cell));
            const int cy = std::min(grid_n - 1, static_cast<int>(y / cell));
            buckets[static_cast<std::size_t>(cy) * grid_n + cx].push_back(
                static_cast<std::uint32_t>(i));
        }

        auto nearest = [&](double x, double y) {
            const int cx = std::clamp(static_cast<int>(x / cell), 0, grid_n - 1);
            const int cy = std::clamp(static_cast<int>(y / cell), 0, grid_n - 1);
            std::uint32_t best = 0;
            double best_d2 = 1e300;
            for (int ring = 0; ring < 2 * grid_n; ++ring) {
                if (best_d2 < 1e300 && ring > 1) {
                    const double safe = (ring - 1) * cell;
                    if (safe * safe > best_d2) break;
                }
                for (int dy = -ring; dy <= ring; ++dy) {
                    for (int dx = -ring; dx <= ring; ++dx) {
                        if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                        const int ix = cx + dx;
                        const int iy = cy + dy;
                        if (ix < 0 || ix >= grid_n || iy < 0 || iy >= grid_n) continue;
                        for (const std::uint32_t i :
                             buckets[static_cast<std::size_t>(iy) * grid_n + ix]) {
                            const double ddx = bx[i] - x;
                            const double ddy = by[i] - y;
                            const double d2 = ddx * ddx + ddy * ddy;
                            if (d2 < best_d2) {
                                best_d2 = d2;
                                best = i;
                            }
                        }
                    }
                }
            }
            return best;
        };

        const long nu = draw_poisson(rng, user_density * window * window);
        thread_local std::vector<long> cell_load;
        thread_local std::vector<std::uint32_t> central_users;
        cell_load.assign(nb, 0);
        central_users.clear();
        const double lo = 0.25 * window;
        const double hi = 0.75 * window;
        for (long j = 0; j < nu; ++j) {
            const double x = rng.uniform() * window;
            const double y = rng.uniform() * window;
            const std::uint32_t b = nearest(x, y);
            ++cell_load[b];
            if (x >= lo && x <= hi && y >= lo && y <= hi) central_users.push_back(b);
        }
        auto& hist = hists[w];
        for (const std::uint32_t b : central_users) {
            const long load = cell_load[b];
            if (static_cast<std::size_t>(load) >= hist.size()) hist.resize(load + 1, 0);
            ++hist[load];
        }
    });

    std::size_t max_load = 1;
    for (const auto& h : hists) max_load = std::max(max_load, h.size());
    std::vector<double> pmf(max_load, 0.0);
    double total = 0.0;
    for (const auto& h : hists)
        for (std::size_t n = 0; n < h.size(); ++n) {
            pmf[n] += static_cast<double>(h[n]);
            total += static_cast<double>(h[n]);
        }
    if (total > 0.0)
        for (auto& v : pmf) v /= total;
    return pmf;
}

}  // namespace mmwcov::montecarlo
