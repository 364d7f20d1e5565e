/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#include "mmwcov/geodata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <json.hpp>

#include "mmwcov/common.hpp"

namespace mmwcov::geodata {

namespace {

double cross(Point o, Point a, Point b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int sign(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

bool point_on_collinear_segment(Point p, Point a, Point b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

/// Closed segment intersection test (touching counts).
bool segments_intersect(Point p1, Point p2, Point q1, Point q2) {
    const int d1 = sign(cross(q1, q2, p1));
    const int d2 = sign(cross(q1, q2, p2));
    const int d3 = sign(cross(p1, p2, q1));
    const int d4 = sign(cross(p1, p2, q2));
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    if (d1 == 0 && point_on_collinear_segment(p1, q1, q2)) return true;
    if (d2 == 0 && point_on_collinear_segment(p2, q1, q2)) return true;
    if (d3 == 0 && point_on_collinear_segment(q1, p1, p2)) return true;
    if (d4 == 0 && point_on_collinear_segment(q2, p1, p2)) return true;
    return false;
}

bool point_in_polygon(Point p, const Polygon& poly) {
    bool inside = false;
    const auto& v = poly.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        const Point a = v[j];
        const Point b = v[i];
        if (cross(a, b, p) == 0.0 && point_on_collinear_segment(p, a, b)) return true;
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x_int = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_int) inside = !inside;
        }
    }
    return inside;
}

void validate_polygon(const Polygon& poly, std::size_t index) {
    auto fail = [index](const std::string& why) {
        throw std::invalid_argument("polygon " + std::to_string(index) + ": " + why);
    };
    const auto& v = poly.vertices;
    if (v.size() < 3) fail("needs at least 3 vertices");
    for (const auto& p : v)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) fail("non-finite vertex");
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[i];
        const Point b = v[(i + 1) % n];
        if (a.x == b.x && a.y == b.y) fail("repeated vertex");
    }
    // Non-adjacent edges may not touch at all in a simple polygon.
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (adjacent) continue;
            if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]))
                fail("self-intersecting");
        }
    }
    if (polygon_area(poly) == 0.0) fail("zero area");
}

}  // namespace

double polygon_area(const Polygon& p) {
    double acc = 0.0;
    const auto& v = p.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
        acc += v[j].x * v[i].y - v[i].x * v[j].y;
    return 0.5 * acc;
}

double polygon_perimeter(const Polygon& p) {
    double acc = 0.0;
    const auto& v = p.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
        acc += std::hypot(v[i].x - v[j].x, v[i].y - v[j].y);
    return acc;
}

BuildingSet::BuildingSet(Rect region, std::vector<Polygon> polygons)
    : region_(region), polygons_(std::move(polygons)) {
    if (!(region_.xmax > region_.xmin && region_.ymax > region_.ymin))
        throw std::invalid_argument("region: must have positive extent");
    for (std::size_t i = 0; i < polygons_.size(); ++i) {
        auto& poly = polygons_[i];
        // Drop an explicit closing vertex if present.
        if (poly.vertices.size() >= 2) {
            const Point f = poly.vertices.front();
            const Point l = poly.vertices.back();
            if (f.x == l.x && f.y == l.y) poly.vertices.pop_back();
        }
        validate_polygon(poly, i);
        if (polygon_area(poly) < 0.0)
            std::reverse(poly.vertices.begin(), poly.vertices.end());
    }
    build_index();
}

void BuildingSet::build_index() {
    edges_.clear();
    double total_len = 0.0;
    grid_bounds_ = region_;
    for (const auto& poly : polygons_) {
        const auto& v = poly.vertices;
        for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
            edges_.push_back({v[j], v[i]});
            total_len += std::hypot(v[i].x - v[j].x, v[i].y - v[j].y);
            grid_bounds_.xmin = std::min({grid_bounds_.xmin, v[i].x});
            grid_bounds_.ymin = std::min({grid_bounds_.ymin, v[i].y});
            grid_bounds_.xmax = std::max({grid_bounds_.xmax, v[i].x});
            grid_bounds_.ymax = std::max({grid_bounds_.ymax, v[i].y});
        }
    }
    if (edges_.empty()) {
        nx_ = ny_ = 0;
        return;
    }
    // Cell size is four times the mean edge length (performance only; the
    // brute-force predicate defines the semantics).
    cell_size_ = 4.0 * total_len / static_cast<double>(edges_.size());
    const double w = grid_bounds_.width();
    const double h = grid_bounds_.height();
    nx_ = std::clamp(static_cast<int>(std::ceil(w / cell_size_)), 1, 2048);
    ny_ = std::clamp(static_cast<int>(std::ceil(h / cell_size_)), 1, 2048);
    cell_size_ = std::max(w / nx_, h / ny_);
    nx_ = std::max(1, static_cast<int>(std::ceil(w / cell_size_)));
    ny_ = std::max(1, static_cast<int>(std::ceil(h / cell_size_)));
    cell_edges_.assign(static_cast<std::size_t>(nx_) * ny_, {});
    cell_polys_.assign(static_cast<std::size_t>(nx_) * ny_, {});

    const double eps = 1e-9 * std::max(w, h);
    auto cell_range = [&](double lo, double hi, double origin, int count) {
        int a = static_cast<int>(std::floor((lo - eps - origin) / cell_size_));
        int b = static_cast<int>(std::floor((hi + eps - origin) / cell_size_));
        return std::pair<int, int>{std::clamp(a, 0, count - 1), std::clamp(b, 0, count - 1)};
    };
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
        const auto [ix0, ix1] = cell_range(std::min(edges_[e].a.x, edges_[e].b.x),
                                           std::max(edges_[e].a.x, edges_[e].b.x),
                                           grid_bounds_.xmin, nx_);
        const auto [iy0, iy1] = cell_range(std::min(edges_[e].a.y, edges_[e].b.y),
                                           std::max(edges_[e].a.y, edges_[e].b.y),
                                           grid_bounds_.ymin, ny_);
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix)
                cell_edges_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(e);
    }
    for (std::uint32_t p = 0; p < polygons_.size(); ++p) {
        double xl = 1e300, yl = 1e300, xh = -1e300, yh = -1e300;
        for (const auto& v : polygons_[p].vertices) {
            xl = std::min(xl, v.x);
            yl = std::min(yl, v.y);
            xh = std::max(xh, v.x);
            yh = std::max(yh, v.y);
        }
        const auto [ix0, ix1] = cell_range(xl, xh, grid_bounds_.xmin, nx_);
        const auto [iy0, iy1] = cell_range(yl, yh, grid_bounds_.ymin, ny_);
        for (int iy = iy0; iy <= iy1; ++iy)
            for (int ix = ix0; ix <= ix1; ++ix)
                cell_polys_[static_cast<std::size_t>(iy) * nx_ + ix].push_back(p);
    }
}

void BuildingSet::collect_candidate_edges(Point p1, Point p2,
                                          std::vector<std::uint32_t>& out) const {
    out.clear();
    if (nx_ == 0) return;

    // Clip the segment to the grid bounds (Liang-Barsky).
    const double dx = p2.x - p1.x;
    const double dy = p2.y - p1.y;
    double t0 = 0.0, t1 = 1.0;
    auto clip = [&](double p, double q) {
        if (p == 0.0) return q >= 0.0;
        const double r = q / p;
        if (p < 0.0) {
            if (r > t1) return false;
            if (r > t0) t0 = r;
        } else {
            if (r < t0) return false;
            if (r < t1) t1 = r;
        }
        return true;
    };
    if (!clip(-dx, p1.x - grid_bounds_.xmin) || !clip(dx, grid_bounds_.xmax - p1.x) ||
        !clip(-dy, p1.y - grid_bounds_.ymin) || !clip(dy, grid_bounds_.ymax - p1.y))
        return;
    t0 = std::max(0.0, t0 - 1e-12);
    t1 = std::min(1.0, t1 + 1e-12);

    auto cell_of = [&](double x, double y) {
        int ix = static_cast<int>(std::floor((x - grid_bounds_.xmin) / cell_size_));
        int iy = static_cast<int>(std::floor((y - grid_bounds_.ymin) / cell_size_));
        return std::pair<int, int>{std::clamp(ix, 0, nx_ - 1), std::clamp(iy, 0, ny_ - 1)};
    };
    auto [ix, iy] = cell_of(p1.x + t0 * dx, p1.y + t0 * dy);
    const auto [ex, ey] = cell_of(p1.x + t1 * dx, p1.y + t1 * dy);

    const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
    const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
    auto boundary_t = [&](int idx, double origin, double start, double delta, int step) {
        if (step == 0) return 1e300;
        const double edge = origin + (idx + (step > 0 ? 1 : 0)) * cell_size_;
        return (edge - start) / delta;
    };
    double t_max_x = boundary_t(ix, grid_bounds_.xmin, p1.x, dx, step_x);
    double t_max_y = boundary_t(iy, grid_bounds_.ymin, p1.y, dy, step_y);
    const double t_delta_x = step_x == 0 ? 1e300 : cell_size_ / std::abs(dx);
    const double t_delta_y = step_y == 0 ? 1e300 : cell_size_ / std::abs(dy);

    const int max_steps = nx_ + ny_ + 4;
    for (int it = 0; it < max_steps; ++it) {
        const auto& bucket = cell_edges_[static_cast<std::size_t>(iy) * nx_ + ix];
        out.insert(out.end(), bucket.begin(), bucket.end());
        if (ix == ex && iy == ey) break;
        if (t_max_x < t_max_y) {
            ix += step_x;
            t_max_x += t_delta_x;
        } else {
            iy += step_y;
            t_max_y += t_delta_y;
        }
        if (ix < 0 || ix >= nx_ || iy < 0 || iy >= ny_) break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

bool BuildingSet::segment_blocked(Point p1, Point p2) const {
    thread_local std::vector<std::uint32_t> candidates;
    collect_candidate_edges(p1, p2, candidates);
    for (const std::uint32_t e : candidates)
        if (segments_intersect(p1, p2, edges_[e].a, edges_[e].b)) return true;
    const Point mid{0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)};
    return contains(mid);
}

bool BuildingSet::segment_blocked_brute(Point p1, Point p2) const {
    for (const auto& e : edges_)
        if (segments_intersect(p1, p2, e.a, e.b)) return true;
    const Point mid{0.5 * (p1.x + p2.x), 0.5 * (p1.y + p2.y)};
    for (const auto& poly : polygons_)
        if (point_in_polygon(mid, poly)) return true;
    return false;
}

bool BuildingSet::contains(Point p) const {
    if (polygons_.empty()) return false;
    if (nx_ == 0) return false;
    if (p.x < grid_bounds_.xmin || p.x > grid_bounds_.xmax || p.y < grid_bounds_.ymin ||
        p.y > grid_bounds_.ymax)
        return false;
    const int ix = std::clamp(
        static_cast<int>(std::floor((p.x - grid_bounds_.xmin) / cell_size_)), 0, nx_ - 1);
    const int iy = std::clamp(
        static_cast<int>(std::floor((p.y - grid_bounds_.ymin) / cell_size_)), 0, ny_ - 1);
    for (const std::uint32_t id : cell_polys_[static_cast<std::size_t>(iy) * nx_ + ix])
        if (point_in_polygon(p, polygons_[id])) return true;
    return false;
}

Point BuildingSet::sample_outdoor(const Rect& within, Xoshiro256pp& rng) const {
    for (int tries = 0; tries < 1000000; ++tries) {
        const Point p{within.xmin + rng.uniform() * within.width(),
                      within.ymin + rng.uniform() * within.height()};
        if (!contains(p)) return p;
    }
    throw std::runtime_error("sample_outdoor: rejection sampling failed (region fully built?)");
}

namespace {

namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPolygon = bg::model::polygon<BPoint, false, true>;  // ccw, closed
using BMulti = bg::model::multi_polygon<BPolygon>;

BMulti to_boost(const Polygon& p) {
    BPolygon out;
    for (const auto& v : p.vertices) bg::append(out.outer(), BPoint(v.x, v.y));
    bg::correct(out);
    BMulti m;
    m.push_back(out);
    return m;
}

BMulti union_tree(std::vector<BMulti>& items, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return items[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    BMulti left = union_tree(items, lo, mid);
    BMulti right = union_tree(items, mid, hi);
    BMulti merged;
    bg::union_(left, right, merged);
    return merged;
}

}  // namespace

blockage::BuildingStats building_stats(const BuildingSet& set) {
    blockage::BuildingStats stats;
    const double region_area = set.region().area();
    const auto& polys = set.polygons();
    stats.density_per_m2 = static_cast<double>(polys.size()) / region_area;
    if (polys.empty()) return stats;

    double perim = 0.0;
    double area = 0.0;
    for (const auto& p : polys) {
        perim += polygon_perimeter(p);
        area += std::abs(polygon_area(p));
    }
    stats.mean_perimeter_m = perim / static_cast<double>(polys.size());
    stats.mean_area_m2 = area / static_cast<double>(polys.size());

    std::vector<BMulti> items;
    items.reserve(polys.size());
    for (const auto& p : polys) items.push_back(to_boost(p));
    const BMulti merged = union_tree(items, 0, items.size());

    BPolygon region_poly;
    const Rect& r = set.region();
    bg::append(region_poly.outer(), BPoint(r.xmin, r.ymin));
    bg::append(region_poly.outer(), BPoint(r.xmax, r.ymin));
    bg::append(region_poly.outer(), BPoint(r.xmax, r.ymax));
    bg::append(region_poly.outer(), BPoint(r.xmin, r.ymax));
    bg::correct(region_poly);
    BMulti clipped;
    bg::intersection(merged, region_poly, clipped);
    stats.covered_fraction = bg::area(clipped) / region_area;
    return stats;
}

EmpiricalPlos empirical_p_los(const BuildingSet& set, long sample_pairs, double bin_width,
                              Xoshiro256pp& rng, double max_distance) {
    if (sample_pairs < 10000)
        throw std::invalid_argument("empirical_p_los: need at least 10000 sample pairs");
    if (!(bin_width > 0.0)) throw std::invalid_argument("empirical_p_los: bin_width must be > 0");
    const Rect& region = set.region();
    if (max_distance <= 0.0) max_distance = 0.5 * std::min(region.width(), region.height());
    const int nbins = static_cast<int>(std::ceil(max_distance / bin_width));
    std::vector<long> total(nbins, 0);
    std::vector<long> los(nbins, 0);

    for (long i = 0; i < sample_pairs; ++i) {
        const Point p1 = set.sample_outdoor(region, rng);
        Point p2;
        double d = 0.0;
        bool ok = false;
        for (int tries = 0; tries < 1000; ++tries) {
            d = rng.uniform() * max_distance;
            const double phi = 2.0 * kPi * rng.uniform();
            p2 = Point{p1.x + d * std::cos(phi), p1.y + d * std::sin(phi)};
            if (region.contains(p2) && !set.contains(p2)) {
                ok = true;
                break;
            }
        }
        if (!ok) continue;
        const int bin = std::min(static_cast<int>(d / bin_width), nbins - 1);
        ++total[bin];
        if (!set.segment_blocked(p1, p2)) ++los[bin];
    }

    EmpiricalPlos out;
    for (int b = 0; b < nbins; ++b) {
        if (total[b] == 0) continue;
        out.table.distances_m.push_back((b + 0.5) * bin_width);
        out.table.probs.push_back(static_cast<double>(los[b]) / static_cast<double>(total[b]));
        out.counts.push_back(total[b]);
    }
    return out;
}

double fit_p_l(const BuildingSet& set, double radius, long sample_users, Xoshiro256pp& rng,
               long disk_samples) {
    if (!(radius > 0.0)) throw std::invalid_argument("fit_p_l: radius must be > 0");
    if (sample_users < 1) throw std::invalid_argument("fit_p_l: need sample_users >= 1");
    const Rect& region = set.region();
    Rect inner{region.xmin + radius, region.ymin + radius, region.xmax - radius,
               region.ymax - radius};
    if (!(inner.xmax > inner.xmin && inner.ymax > inner.ymin)) inner = region;

    double acc = 0.0;
    long used = 0;
    for (long u = 0; u < sample_users; ++u) {
        const Point user = set.sample_outdoor(inner, rng);
        long outdoor = 0;
        long visible = 0;
        for (long s = 0; s < disk_samples; ++s) {
            const double r = radius * std::sqrt(rng.uniform());
            const double phi = 2.0 * kPi * rng.uniform();
            const Point p{user.x + r * std::cos(phi), user.y + r * std::sin(phi)};
            if (!region.contains(p) || set.contains(p)) continue;
            ++outdoor;
            if (!set.segment_blocked(user, p)) ++visible;
        }
        if (outdoor == 0) continue;
        acc += static_cast<double>(visible) / static_cast<double>(outdoor);
        ++used;
    }
    if (used == 0) throw std::runtime_error("fit_p_l: no usable users sampled");
    return acc / static_cast<double>(used);
}

BuildingSet boolean_rectangle_field(const Rect& region, double density_per_m2, double width_m,
                                    double height_m, std::uint64_t seed) {
    if (!(density_per_m2 > 0.0 && width_m > 0.0 && height_m > 0.0))
        throw std::invalid_argument("boolean_rectangle_field: positive density and sides required");
    const double margin = 0.5 * std::hypot(width_m, height_m);
    const Rect ext{region.xmin - margin, region.ymin - margin, region.xmax + margin,
                   region.ymax + margin};
    Xoshiro256pp rng(seed, 0x6f6f74);
    std::poisson_distribution<long> count_dist(density_per_m2 * ext.area());
    const long count = count_dist(rng);
    std::vector<Polygon> polys;
    polys.reserve(count);
    for (long i = 0; i < count; ++i) {
        const Point c{ext.xmin + rng.uniform() * ext.width(),
                      ext.ymin + rng.uniform() * ext.height()};
        const double theta = kPi * rng.uniform();
        const double ux = 0.5 * width_m * std::cos(theta);
        const double uy = 0.5 * width_m * std::sin(theta);
        const double vx = -0.5 * height_m * std::sin(theta);
        const double vy = 0.5 * height_m * std::cos(theta);
        Polygon p;
        p.vertices = {{c.x - ux - vx, c.y - uy - vy},
                      {c.x + ux - vx, c.y + uy - vy},
                      {c.x + ux + vx, c.y + uy + vy},
                      {c.x - ux + vx, c.y - uy + vy}};
        double xl = 1e300, yl = 1e300, xh = -1e300, yh = -1e300;
        for (const auto& v : p.vertices) {
            xl = std::min(xl, v.x);
            yl = std::min(yl, v.y);
            xh = std::max(xh, v.x);
            yh = std::max(yh, v.y);
        }
        if (xh < region.xmin || xl > region.xmax || yh < region.ymin || yl > region.ymax)
            continue;
        polys.push_back(std::move(p));
    }
    return BuildingSet(region, std::move(polys));
}

BuildingSet BuildingSet::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open buildings file: " + path);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("buildings file parse error: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw ConfigError("buildings file: top level must be an object");
    for (const auto& [key, _] : doc.items())
        if (key != "region" && key != "buildings")
            throw ConfigError("buildings file: unknown key '" + key + "'");
    if (!doc.contains("region") || !doc.contains("buildings"))
        throw ConfigError("buildings file: needs 'region' and 'buildings'");

    const auto& reg = doc["region"];
    if (!reg.is_array() || reg.size() != 2 || !reg[0].is_array() || reg[0].size() != 2 ||
        !reg[1].is_array() || reg[1].size() != 2)
        throw ConfigError("region: expected [[xmin,ymin],[xmax,ymax]]");
    Rect region{reg[0][0].get<double>(), reg[0][1].get<double>(), reg[1][0].get<double>(),
                reg[1][1].get<double>()};

    std::vector<Polygon> polys;
    const auto& buildings = doc["buildings"];
    if (!buildings.is_array()) throw ConfigError("buildings: expected an array of polygons");
    for (std::size_t i = 0; i < buildings.size(); ++i) {
        const auto& ring = buildings[i];
        if (!ring.is_array())
            throw ConfigError("buildings[" + std::to_string(i) + "]: expected vertex array");
        Polygon p;
        for (const auto& vtx : ring) {
            if (!vtx.is_array() || vtx.size() != 2)
                throw ConfigError("buildings[" + std::to_string(i) + "]: vertex must be [x,y]");
            p.vertices.push_back({vtx[0].get<double>(), vtx[1].get<double>()});
        }
        polys.push_back(std::move(p));
    }
    try {
        return BuildingSet(region, std::move(polys));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("buildings file: ") + e.what());
    }
}

void BuildingSet::save(const std::string& path) const {
    nlohmann::json doc;
    doc["region"] = {{region_.xmin, region_.ymin}, {region_.xmax, region_.ymax}};
    auto& buildings = doc["buildings"] = nlohmann::json::array();
    for (const auto& poly : polygons_) {
        nlohmann::json ring = nlohmann::json::array();
        for (const auto& v : poly.vertices) ring.push_back({v.x, v.y});
        buildings.push_back(std::move(ring));
    }
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << doc.dump(2) << '\n';
}

}  // namespace mmwcov::geodata
