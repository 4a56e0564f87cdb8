#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "flowpact/errors.hpp"

namespace flowpact {

/// 2D point / vector with double coordinates (meters).
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2() = default;
    constexpr Vec2(double px, double py) : x(px), y(py) {}

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    Vec2& operator+=(Vec2 o) { x += o.x; y += o.y; return *this; }
    Vec2& operator-=(Vec2 o) { x -= o.x; y -= o.y; return *this; }
    Vec2& operator*=(double s) { x *= s; y *= s; return *this; }
    constexpr bool operator==(const Vec2&) const = default;

    constexpr double dot(Vec2 o) const { return x * o.x + y * o.y; }
    constexpr double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }
    /// 90-degree counterclockwise rotation.
    constexpr Vec2 perp() const { return {-y, x}; }
    constexpr Vec2 perp_cw() const { return {y, -x}; }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }

    /// Unit vector; throws GeometryError on a (near-)zero input.
    Vec2 normalized(double eps = 1e-12) const {
        const double n = norm();
        if (n <= eps) throw GeometryError("cannot normalize zero-length vector");
        return {x / n, y / n};
    }
};

inline constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }
/// Angle between two nonzero vectors, in [0, pi].
double angle_between(Vec2 a, Vec2 b);
/// Rotate v by the given angle (radians, counterclockwise).
Vec2 rotate(Vec2 v, double radians);

using Point2 = Vec2;

/// Simple polygon with optional holes. Exterior is counterclockwise, holes
/// clockwise, rings are stored open (no repeated last vertex), >= 3 vertices.
struct Polygon {
    std::vector<Vec2> exterior;
    std::vector<std::vector<Vec2>> holes;

    double area() const;
    /// Length of the exterior ring plus all hole rings.
    double boundary_length() const;
};

/// Checks ring sizes, orientation, finiteness, and self-intersection.
/// Throws GeometryError describing the first violation found.
void validate_polygon(const Polygon& p);

/// Robot-shaped disc; the spec's "spot".
struct Disc {
    Vec2 center;
    double radius = 0.0;

    double area() const { return M_PI * radius * radius; }
};

/// Convex hull of two equal-radius discs; degenerates to a disc when the
/// endpoints coincide.
struct Capsule {
    Vec2 a;
    Vec2 b;
    double radius = 0.0;

    double length() const { return distance(a, b); }
    double area() const { return M_PI * radius * radius + 2.0 * radius * length(); }
    bool is_disc(double eps = 0.0) const { return length() <= eps; }
    /// Distance from p to the capsule's core segment.
    double core_distance(Vec2 p) const;
    bool contains(Vec2 p, double eps = 0.0) const { return core_distance(p) <= radius + eps; }
};

/// Set of disjoint polygons (a multi-polygon).
struct PolyRegion {
    std::vector<Polygon> parts;

    bool empty() const { return parts.empty(); }
    double area() const;
    double boundary_length() const;
};

struct BoundingBox {
    Vec2 lo{0, 0};
    Vec2 hi{0, 0};

    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    double diagonal() const { return (hi - lo).norm(); }
    bool contains(Vec2 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
    BoundingBox inflated(double r) const { return {{lo.x - r, lo.y - r}, {hi.x + r, hi.y + r}}; }
};

BoundingBox bounding_box(const Polygon& p);
BoundingBox bounding_box(const PolyRegion& r);

enum class BoolOp { Union, Intersect, Subtract };

enum class Containment { Contained, Intersects, Disjoint };

/// Minkowski sum of a polygon with a disc of radius r >= 0. Round corners are
/// discretized so the chordal deviation stays within arc_tol. r == 0 returns
/// the polygon unchanged.
PolyRegion offset_polygon(const Polygon& poly, double r, double arc_tol);

/// Regularized boolean of two regions. Components thinner than sliver_width
/// (mean width 2*area/perimeter) are discarded; pass 0 to keep everything.
PolyRegion region_boolean(const PolyRegion& a, const PolyRegion& b, BoolOp op,
                          double sliver_width = 0.0);

/// Positive-area overlap test: true iff center distance < r_a + r_b - eps.
bool discs_overlap(const Disc& a, const Disc& b, double eps);
/// Tangency within eps: |distance - (r_a + r_b)| <= eps.
bool discs_tangent(const Disc& a, const Disc& b, double eps);

/// Convex hull of two equal-radius discs. Throws on mismatched radii.
Capsule capsule_hull(const Disc& a, const Disc& b);

/// Three-way disc/region classification with tolerance eps:
/// contained  — disc lies in the region with clearance >= -eps,
/// disjoint   — disc stays at least eps away from the region,
/// intersects — anything in between.
Containment disc_in_region(const Disc& d, const PolyRegion& r, double eps);

// --- supporting predicates and constructions used across the library ---

bool point_in_polygon(Vec2 p, const Polygon& poly);
bool point_in_region(Vec2 p, const PolyRegion& r);
/// Distance from p to the region's boundary (0 on the boundary itself).
double boundary_distance(Vec2 p, const PolyRegion& r);
/// Signed clearance: positive inside the region, negative outside.
double signed_clearance(Vec2 p, const PolyRegion& r);
/// Distance from p to the region (0 if inside).
double region_distance(Vec2 p, const PolyRegion& r);
/// Minimum distance between two regions (0 if they touch or overlap).
double region_distance(const PolyRegion& a, const PolyRegion& b);
/// Closest boundary point of the region to p.
Vec2 nearest_boundary_point(Vec2 p, const PolyRegion& r);

/// Dilation/erosion of a whole region by a disc of radius r.
PolyRegion dilate(const PolyRegion& r, double radius, double arc_tol);
PolyRegion erode(const PolyRegion& r, double radius, double arc_tol);
/// Morphological opening: erode then dilate. Removes features narrower than
/// the structuring disc; the result is the union of all contained discs.
PolyRegion morphological_open(const PolyRegion& r, double radius, double arc_tol);

/// Polygonal approximations (chordal deviation <= arc_tol, inscribed).
Polygon make_disc_polygon(const Disc& d, double arc_tol);
Polygon make_capsule_polygon(const Capsule& c, double arc_tol);
Polygon make_rect_polygon(Vec2 lo, Vec2 hi);

/// Minimum distance between two segments.
double segment_distance(Vec2 a0, Vec2 a1, Vec2 b0, Vec2 b1);

/// First hit parameter t >= t_min such that origin + t*dir lies on the
/// region's boundary; nullopt if the ray never hits it.
std::optional<double> ray_boundary_hit(Vec2 origin, Vec2 dir, const PolyRegion& r,
                                       double t_min = 0.0);

/// Splits a region into connected components (each part of a PolyRegion is
/// already one component; this regroups parts that touch within eps).
std::vector<PolyRegion> connected_components(const PolyRegion& r, double eps);

/// Number of segments used to discretize a full circle of the given radius
/// with chordal deviation <= arc_tol.
int circle_segments(double radius, double arc_tol);

}  // namespace flowpact
