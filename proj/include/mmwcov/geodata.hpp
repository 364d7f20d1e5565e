/*
 * Copyright (c) 2026 the mmwcov authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

#ifndef MMWCOV_GEODATA_HPP
#define MMWCOV_GEODATA_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "mmwcov/blockage.hpp"
#include "mmwcov/rng.hpp"

namespace mmwcov::geodata {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

/// Simple polygon, counter-clockwise vertex order (normalized on ingest).
struct Polygon {
    std::vector<Point> vertices;
};

struct Rect {
    double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;
    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }
    bool contains(Point p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
};

double polygon_area(const Polygon& p);       // positive for CCW rings
double polygon_perimeter(const Polygon& p);

/// Immutable 2-D building footprint collection with a uniform-grid edge
/// index for ray casting. All queries are safe to run concurrently.
class BuildingSet {
public:
    BuildingSet(Rect region, std::vector<Polygon> polygons);

    static BuildingSet load(const std::string& path);
    void save(const std::string& path) const;

    const Rect& region() const { return region_; }
    const std::vector<Polygon>& polygons() const { return polygons_; }

    /// True iff the segment p1-p2 crosses any polygon edge or runs through a
    /// polygon interior; endpoints lying on a boundary count as blocked.
    bool segment_blocked(Point p1, Point p2) const;

    /// Reference predicate testing every edge; the grid-indexed query must
    /// agree with this verdict exactly.
    bool segment_blocked_brute(Point p1, Point p2) const;

    /// True iff the point lies inside (or on the boundary of) any polygon.
    bool contains(Point p) const;

    /// Uniform sample over the outdoor part of `within` by rejection.
    Point sample_outdoor(const Rect& within, Xoshiro256pp& rng) const;

private:
    struct Edge {
        Point a, b;
    };
    void build_index();
    void collect_candidate_edges(Point p1, Point p2, std::vector<std::uint32_t>& out) const;

    Rect region_;
    std::vector<Polygon> polygons_;
    std::vector<Edge> edges_;

    // Uniform grid over the footprint bounding box.
    Rect grid_bounds_;
    double cell_size_ = 0.0;
    int nx_ = 0, ny_ = 0;
    std::vector<std::vector<std::uint32_t>> cell_edges_;
    std::vector<std::vector<std::uint32_t>> cell_polys_;
};

/// Footprint statistics: density and mean perimeter/area are per polygon as
/// listed; the covered fraction uses the clipped union so overlaps are not
/// double-counted.
blockage::BuildingStats building_stats(const BuildingSet& set);

struct EmpiricalPlos {
    blockage::EmpiricalTable table;
    std::vector<long> counts;  // samples per bin
};

/// Empirical LOS probability by distance: outdoor point pairs sampled
/// uniformly, binned by separation, LOS fraction per bin.
EmpiricalPlos empirical_p_los(const BuildingSet& set, long sample_pairs, double bin_width,
                              Xoshiro256pp& rng, double max_distance = 0.0);

/// Average over outdoor users of (LOS outdoor area within radius) /
/// (outdoor area within radius), each estimated by uniform disk sampling.
double fit_p_l(const BuildingSet& set, double radius, long sample_users, Xoshiro256pp& rng,
               long disk_samples = 512);

/// Synthetic Boolean field: rectangle centers form a PPP of the given
/// density over the region (plus a margin), sides w x h, orientation
/// uniform. Rectangles not touching the region are dropped.
BuildingSet boolean_rectangle_field(const Rect& region, double density_per_m2, double width_m,
                                    double height_m, std::uint64_t seed);

}  // namespace mmwcov::geodata

#endif  // MMWCOV_GEODATA_HPP
