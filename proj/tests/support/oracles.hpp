// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written from scratch against textbook
// definitions and must not call into flowpact beyond plain data types.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "flowpact/geometry.hpp"

namespace oracle {

using flowpact::Polygon;
using flowpact::Vec2;

inline double seg_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double l2 = ab.norm2();
    if (l2 == 0.0) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / l2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

// Even-odd rule over every ring of the polygon.
inline bool point_in_polygon(Vec2 p, const Polygon& poly) {
    auto cross_count = [&](const std::vector<Vec2>& ring) {
        int c = 0;
        for (size_t i = 0, n = ring.size(); i < n; ++i) {
            const Vec2 a = ring[i], b = ring[(i + 1) % n];
            if ((a.y > p.y) != (b.y > p.y)) {
                const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (x > p.x) ++c;
            }
        }
        return c;
    };
    int total = cross_count(poly.exterior);
    for (const auto& h : poly.holes) total += cross_count(h);
    return total % 2 == 1;
}

inline double polygon_distance(Vec2 p, const Polygon& poly) {
    double best = std::numeric_limits<double>::max();
    auto walk = [&](const std::vector<Vec2>& ring) {
        for (size_t i = 0, n = ring.size(); i < n; ++i)
            best = std::min(best, seg_distance(p, ring[i], ring[(i + 1) % n]));
    };
    walk(poly.exterior);
    for (const auto& h : poly.holes) walk(h);
    return best;
}

// Membership in the Minkowski sum polygon (+) disc(r): inside the polygon or
// within r of its boundary.
inline bool in_offset(Vec2 p, const Polygon& poly, double r) {
    if (oracle::point_in_polygon(p, poly)) return true;
    return oracle::polygon_distance(p, poly) <= r;
}

// Deterministic Monte-Carlo area of an arbitrary membership predicate.
template <typename Member>
double mc_area(Member&& member, flowpact::BoundingBox box, int samples, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x);
    std::uniform_real_distribution<double> uy(box.lo.y, box.hi.y);
    long hits = 0;
    for (int i = 0; i < samples; ++i) {
        const Vec2 p{ux(rng), uy(rng)};
        if (member(p)) ++hits;
    }
    return box.width() * box.height() * static_cast<double>(hits) / samples;
}

}  // namespace oracle
