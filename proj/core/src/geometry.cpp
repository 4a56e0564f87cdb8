#include "flowpact/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/linestring.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

namespace bg = boost::geometry;

namespace flowpact {
namespace {

using BgPoint = bg::model::d2::point_xy<double>;
using BgPolygon = bg::model::polygon<BgPoint>;  // clockwise, closed
using BgMulti = bg::model::multi_polygon<BgPolygon>;

double ring_signed_area(const std::vector<Vec2>& ring) {
    double acc = 0.0;
    for (size_t i = 0; i < ring.size(); ++i) {
        const Vec2 a = ring[i];
        const Vec2 b = ring[(i + 1) % ring.size()];
        acc += a.cross(b);
    }
    return 0.5 * acc;
}

void append_ring(BgPolygon::ring_type& out, const std::vector<Vec2>& ring) {
    out.reserve(ring.size() + 1);
    for (const Vec2& v : ring) out.emplace_back(v.x, v.y);
    out.emplace_back(ring.front().x, ring.front().y);  // close
}

BgPolygon to_bg(const Polygon& p) {
    BgPolygon out;
    append_ring(out.outer(), p.exterior);
    out.inners().resize(p.holes.size());
    for (size_t i = 0; i < p.holes.size(); ++i) append_ring(out.inners()[i], p.holes[i]);
    bg::correct(out);
    return out;
}

BgMulti to_bg(const PolyRegion& r) {
    BgMulti out;
    out.reserve(r.parts.size());
    for (const Polygon& p : r.parts) out.push_back(to_bg(p));
    return out;
}

std::vector<Vec2> from_bg_ring(const BgPolygon::ring_type& ring, bool want_ccw) {
    std::vector<Vec2> out;
    if (ring.size() < 4) return out;
    out.reserve(ring.size() - 1);
    for (size_t i = 0; i + 1 < ring.size(); ++i) out.push_back({bg::get<0>(ring[i]), bg::get<1>(ring[i])});
    // drop duplicate consecutive vertices boost sometimes leaves behind
    std::vector<Vec2> dedup;
    dedup.reserve(out.size());
    for (const Vec2& v : out) {
        if (dedup.empty() || distance(dedup.back(), v) > 0.0) dedup.push_back(v);
    }
    while (dedup.size() > 1 && distance(dedup.front(), dedup.back()) == 0.0) dedup.pop_back();
    if (dedup.size() < 3) return {};
    const bool is_ccw = ring_signed_area(dedup) > 0.0;
    if (is_ccw != want_ccw) std::reverse(dedup.begin(), dedup.end());
    return dedup;
}

PolyRegion from_bg(const BgMulti& m) {
    PolyRegion out;
    out.parts.reserve(m.size());
    for (const BgPolygon& bp : m) {
        Polygon p;
        p.exterior = from_bg_ring(bp.outer(), /*want_ccw=*/true);
        if (p.exterior.empty()) continue;
        for (const auto& hole : bp.inners()) {
            auto h = from_bg_ring(hole, /*want_ccw=*/false);
            if (!h.empty()) p.holes.push_back(std::move(h));
        }
        out.parts.push_back(std::move(p));
    }
    return out;
}

PolyRegion buffer_region(const PolyRegion& r, double radius, double arc_tol) {
    if (r.empty()) return {};
    if (radius == 0.0) return r;
    const int ppc = circle_segments(std::abs(radius), arc_tol);
    bg::strategy::buffer::distance_symmetric<double> dist(radius);
    bg::strategy::buffer::join_round join(ppc);
    bg::strategy::buffer::end_round end(ppc);
    bg::strategy::buffer::point_circle circ(ppc);
    bg::strategy::buffer::side_straight side;
    BgMulti out;
    bg::buffer(to_bg(r), out, dist, side, join, end, circ);
    return from_bg(out);
}

void drop_slivers(PolyRegion& r, double sliver_width) {
    if (sliver_width <= 0.0) return;
    std::erase_if(r.parts, [&](const Polygon& p) {
        const double a = p.area();
        const double len = p.boundary_length();
        return len <= 0.0 || a <= 0.0 || 2.0 * a / len < sliver_width;
    });
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double l2 = ab.norm2();
    if (l2 == 0.0) return distance(p, a);
    double t = (p - a).dot(ab) / l2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, a + t * ab);
}

Vec2 nearest_on_segment(Vec2 p, Vec2 a, Vec2 b) {
    const Vec2 ab = b - a;
    const double l2 = ab.norm2();
    if (l2 == 0.0) return a;
    const double t = std::clamp((p - a).dot(ab) / l2, 0.0, 1.0);
    return a + t * ab;
}

template <typename Fn>
void for_each_boundary_segment(const PolyRegion& r, Fn&& fn) {
    auto walk = [&](const std::vector<Vec2>& ring) {
        for (size_t i = 0; i < ring.size(); ++i) fn(ring[i], ring[(i + 1) % ring.size()]);
    };
    for (const Polygon& p : r.parts) {
        walk(p.exterior);
        for (const auto& h : p.holes) walk(h);
    }
}

}  // namespace

double angle_between(Vec2 a, Vec2 b) {
    const double na = a.norm(), nb = b.norm();
    if (na <= 0.0 || nb <= 0.0) throw GeometryError("angle_between: zero-length vector");
    const double c = std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
    return std::acos(c);
}

Vec2 rotate(Vec2 v, double radians) {
    const double c = std::cos(radians), s = std::sin(radians);
    return {c * v.x - s * v.y, s * v.x + c * v.y};
}

double Polygon::area() const {
    double a = ring_signed_area(exterior);
    for (const auto& h : holes) a += ring_signed_area(h);  // holes are cw: negative
    return a;
}

double Polygon::boundary_length() const {
    auto ring_len = [](const std::vector<Vec2>& ring) {
        double acc = 0.0;
        for (size_t i = 0; i < ring.size(); ++i) acc += distance(ring[i], ring[(i + 1) % ring.size()]);
        return acc;
    };
    double len = ring_len(exterior);
    for (const auto& h : holes) len += ring_len(h);
    return len;
}

void validate_polygon(const Polygon& p) {
    auto check_ring = [](const std::vector<Vec2>& ring, const char* what) {
        if (ring.size() < 3) throw GeometryError(std::string(what) + ": fewer than 3 vertices");
        for (const Vec2& v : ring)
            if (!v.finite()) throw GeometryError(std::string(what) + ": non-finite coordinate");
    };
    check_ring(p.exterior, "exterior ring");
    if (ring_signed_area(p.exterior) <= 0.0) throw GeometryError("exterior ring must be counterclockwise");
    for (const auto& h : p.holes) {
        check_ring(h, "hole ring");
        if (ring_signed_area(h) >= 0.0) throw GeometryError("hole rings must be clockwise");
    }
    const BgPolygon bp = to_bg(p);
    if (bg::intersects(bp)) throw GeometryError("polygon is self-intersecting");
}

double Capsule::core_distance(Vec2 p) const { return point_segment_distance(p, a, b); }

double PolyRegion::area() const {
    double acc = 0.0;
    for (const Polygon& p : parts) acc += p.area();
    return acc;
}

double PolyRegion::boundary_length() const {
    double acc = 0.0;
    for (const Polygon& p : parts) acc += p.boundary_length();
    return acc;
}

BoundingBox bounding_box(const Polygon& p) {
    BoundingBox bb{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
                   {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
    for (const Vec2& v : p.exterior) {
        bb.lo.x = std::min(bb.lo.x, v.x);
        bb.lo.y = std::min(bb.lo.y, v.y);
        bb.hi.x = std::max(bb.hi.x, v.x);
        bb.hi.y = std::max(bb.hi.y, v.y);
    }
    return bb;
}

BoundingBox bounding_box(const PolyRegion& r) {
    BoundingBox bb{{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()},
                   {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()}};
    for (const Polygon& p : r.parts) {
        const BoundingBox pb = bounding_box(p);
        bb.lo.x = std::min(bb.lo.x, pb.lo.x);
        bb.lo.y = std::min(bb.lo.y, pb.lo.y);
        bb.hi.x = std::max(bb.hi.x, pb.hi.x);
        bb.hi.y = std::max(bb.hi.y, pb.hi.y);
    }
    return bb;
}

int circle_segments(double radius, double arc_tol) {
    if (arc_tol <= 0.0) throw GeometryError("arc_tol must be positive");
    if (radius <= 0.0) return 8;
    const double ratio = std::min(1.0, arc_tol / radius);
    const double n = M_PI / std::acos(1.0 - ratio);
    return std::clamp(static_cast<int>(std::ceil(n)), 8, 4096);
}

PolyRegion offset_polygon(const Polygon& poly, double r, double arc_tol) {
    validate_polygon(poly);
    if (r < 0.0) throw GeometryError("offset radius must be non-negative");
    if (r == 0.0) return PolyRegion{{poly}};
    return buffer_region(PolyRegion{{poly}}, r, arc_tol);
}

PolyRegion region_boolean(const PolyRegion& a, const PolyRegion& b, BoolOp op, double sliver_width) {
    const BgMulti ba = to_bg(a);
    const BgMulti bb = to_bg(b);
    BgMulti out;
    switch (op) {
        case BoolOp::Union: bg::union_(ba, bb, out); break;
        case BoolOp::Intersect: bg::intersection(ba, bb, out); break;
        case BoolOp::Subtract: bg::difference(ba, bb, out); break;
    }
    PolyRegion result = from_bg(out);
    drop_slivers(result, sliver_width);
    return result;
}

bool discs_overlap(const Disc& a, const Disc& b, double eps) {
    return distance(a.center, b.center) < a.radius + b.radius - eps;
}

bool discs_tangent(const Disc& a, const Disc& b, double eps) {
    return std::abs(distance(a.center, b.center) - (a.radius + b.radius)) <= eps;
}

Capsule capsule_hull(const Disc& a, const Disc& b) {
    if (a.radius != b.radius) throw GeometryError("capsule_hull requires equal radii");
    if (a.radius <= 0.0) throw GeometryError("capsule_hull requires positive radius");
    return Capsule{a.center, b.center, a.radius};
}

Containment disc_in_region(const Disc& d, const PolyRegion& r, double eps) {
    if (r.empty()) return Containment::Disjoint;
    const bool inside = point_in_region(d.center, r);
    const double bd = boundary_distance(d.center, r);
    if (inside) {
        if (bd >= d.radius - eps) return Containment::Contained;
        return Containment::Intersects;
    }
    if (bd >= d.radius - eps) return Containment::Disjoint;
    return Containment::Intersects;
}

bool point_in_polygon(Vec2 p, const Polygon& poly) {
    // even-odd crossing count over all rings
    auto crossings = [&](const std::vector<Vec2>& ring) {
        int c = 0;
        for (size_t i = 0; i < ring.size(); ++i) {
            const Vec2 a = ring[i];
            const Vec2 b = ring[(i + 1) % ring.size()];
            if ((a.y > p.y) != (b.y > p.y)) {
                const double xint = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if (p.x < xint) ++c;
            }
        }
        return c;
    };
    int total = crossings(poly.exterior);
    for (const auto& h : poly.holes) total += crossings(h);
    return (total % 2) == 1;
}

bool point_in_region(Vec2 p, const PolyRegion& r) {
    for (const Polygon& poly : r.parts)
        if (point_in_polygon(p, poly)) return true;
    return false;
}

double boundary_distance(Vec2 p, const PolyRegion& r) {
    double best = std::numeric_limits<double>::max();
    for_each_boundary_segment(r, [&](Vec2 a, Vec2 b) { best = std::min(best, point_segment_distance(p, a, b)); });
    return best;
}

double signed_clearance(Vec2 p, const PolyRegion& r) {
    const double bd = boundary_distance(p, r);
    return point_in_region(p, r) ? bd : -bd;
}

double region_distance(Vec2 p, const PolyRegion& r) {
    if (point_in_region(p, r)) return 0.0;
    return boundary_distance(p, r);
}

double region_distance(const PolyRegion& a, const PolyRegion& b) {
    if (a.empty() || b.empty()) return std::numeric_limits<double>::max();
    const BgMulti ba = to_bg(a);
    const BgMulti bb = to_bg(b);
    if (bg::intersects(ba, bb)) return 0.0;
    return bg::distance(ba, bb);
}

Vec2 nearest_boundary_point(Vec2 p, const PolyRegion& r) {
    double best = std::numeric_limits<double>::max();
    Vec2 best_pt = p;
    for_each_boundary_segment(r, [&](Vec2 a, Vec2 b) {
        const Vec2 q = nearest_on_segment(p, a, b);
        const double d = distance(p, q);
        if (d < best) {
            best = d;
            best_pt = q;
        }
    });
    return best_pt;
}

PolyRegion dilate(const PolyRegion& r, double radius, double arc_tol) {
    if (radius < 0.0) throw GeometryError("dilate radius must be non-negative");
    return buffer_region(r, radius, arc_tol);
}

PolyRegion erode(const PolyRegion& r, double radius, double arc_tol) {
    if (radius < 0.0) throw GeometryError("erode radius must be non-negative");
    return buffer_region(r, -radius, arc_tol);
}

PolyRegion morphological_open(const PolyRegion& r, double radius, double arc_tol) {
    return dilate(erode(r, radius, arc_tol), radius, arc_tol);
}

Polygon make_disc_polygon(const Disc& d, double arc_tol) {
    if (d.radius <= 0.0) throw GeometryError("disc radius must be positive");
    const int n = circle_segments(d.radius, arc_tol);
    Polygon out;
    out.exterior.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * M_PI * i / n;
        out.exterior.push_back(d.center + Vec2{d.radius * std::cos(a), d.radius * std::sin(a)});
    }
    return out;
}

Polygon make_capsule_polygon(const Capsule& c, double arc_tol) {
    if (c.radius <= 0.0) throw GeometryError("capsule radius must be positive");
    if (c.length() <= 1e-12) return make_disc_polygon(Disc{c.a, c.radius}, arc_tol);
    const int n_full = circle_segments(c.radius, arc_tol);
    const int n_half = std::max(4, n_full / 2);
    const Vec2 axis = (c.b - c.a).normalized();
    const double base = std::atan2(axis.y, axis.x);
    Polygon out;
    // semicircle around b from -90deg to +90deg relative to the axis, then
    // semicircle around a from +90deg to +270deg
    for (int i = 0; i <= n_half; ++i) {
        const double a = base - M_PI / 2 + M_PI * i / n_half;
        out.exterior.push_back(c.b + Vec2{c.radius * std::cos(a), c.radius * std::sin(a)});
    }
    for (int i = 0; i <= n_half; ++i) {
        const double a = base + M_PI / 2 + M_PI * i / n_half;
        out.exterior.push_back(c.a + Vec2{c.radius * std::cos(a), c.radius * std::sin(a)});
    }
    // remove the duplicated seam points
    std::vector<Vec2> dedup;
    for (const Vec2& v : out.exterior)
        if (dedup.empty() || distance(dedup.back(), v) > 1e-15) dedup.push_back(v);
    if (distance(dedup.front(), dedup.back()) <= 1e-15) dedup.pop_back();
    out.exterior = std::move(dedup);
    return out;
}

Polygon make_rect_polygon(Vec2 lo, Vec2 hi) {
    Polygon out;
    out.exterior = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
    return out;
}

double segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1) {
    // proper intersection means distance zero
    const auto orient = [](Vec2 p, Vec2 q, Vec2 r) { return (q - p).cross(r - p); };
    const double d1 = orient(a0, a1, b0), d2 = orient(a0, a1, b1);
    const double d3 = orient(b0, b1, a0), d4 = orient(b0, b1, a1);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
    return std::min({point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1),
                     point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1)});
}

std::optional<double> ray_boundary_hit(Vec2 origin, Vec2 dir, const PolyRegion& r, double t_min) {
    const Vec2 d = dir.normalized();
    std::optional<double> best;
    for_each_boundary_segment(r, [&](Vec2 a, Vec2 b) {
        const Vec2 e = b - a;
        const double denom = d.cross(e);
        if (std::abs(denom) < 1e-15) return;  // parallel
        const Vec2 ao = a - origin;
        const double t = ao.cross(e) / denom;
        const double s = ao.cross(d) / denom;
        if (t >= t_min && s >= 0.0 && s <= 1.0)
            if (!best || t < *best) best = t;
    });
    return best;
}

std::vector<PolyRegion> connected_components(const PolyRegion& r, double eps) {
    const size_t n = r.parts.size();
    std::vector<size_t> parent(n);
    std::iota(parent.begin(), parent.end(), size_t{0});
    std::function<size_t(size_t)> find = [&](size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const PolyRegion a{{r.parts[i]}};
            const PolyRegion b{{r.parts[j]}};
            if (region_distance(a, b) <= eps) parent[find(i)] = find(j);
        }
    std::vector<PolyRegion> out;
    std::vector<int> slot(n, -1);
    for (size_t i = 0; i < n; ++i) {
        const size_t root = find(i);
        if (slot[root] < 0) {
            slot[root] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[slot[root]].parts.push_back(r.parts[i]);
    }
    return out;
}

}  // namespace flowpact
