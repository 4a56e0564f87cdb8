#include <doctest.h>

#include <cmath>
#include <random>

#include "flowpact/geometry.hpp"
#include "support/oracles.hpp"

using namespace flowpact;

namespace {

Polygon square2() {
    // side 2, centered at the origin
    return make_rect_polygon({-1, -1}, {1, 1});
}

Polygon l_polygon() {
    // concave L: 3x3 square with the top-right 2x2 bite removed, area 5
    Polygon p;
    p.exterior = {{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}};
    return p;
}

constexpr double kArcTol = 1e-4;

}  // namespace

TEST_CASE("offset with r=0 is the identity") {
    const Polygon sq = square2();
    const PolyRegion out = offset_polygon(sq, 0.0, kArcTol);
    REQUIRE(out.parts.size() == 1);
    CHECK(out.area() == doctest::Approx(4.0));
    CHECK(out.parts[0].exterior.size() == 4);
}

TEST_CASE("convex offset area matches A + P*r + pi*r^2") {
    const double r = 0.5;
    const PolyRegion out = offset_polygon(square2(), r, kArcTol);
    const double expected = 4.0 + 8.0 * r + M_PI * r * r;  // 8.7853981...
    CHECK(out.area() == doctest::Approx(expected).epsilon(5e-4));
}

TEST_CASE("concave offset area agrees with the sampling oracle") {
    const Polygon l = l_polygon();
    const double r = 0.5;
    const PolyRegion out = offset_polygon(l, r, kArcTol);
    const auto member = [&](Vec2 p) { return oracle::in_offset(p, l, r); };
    const double mc = oracle::mc_area(member, BoundingBox{{-1, -1}, {4, 4}}, 400000, 42);
    CHECK(std::abs(out.area() - mc) / mc < 0.005);
}

TEST_CASE("offset area grows monotonically in r") {
    const Polygon l = l_polygon();
    double prev = l.area();
    for (double r : {0.1, 0.25, 0.5, 1.0, 2.0}) {
        const double a = offset_polygon(l, r, kArcTol).area();
        CHECK(a >= prev);
        prev = a;
    }
}

TEST_CASE("offset membership matches distance-to-polygon away from the arc band") {
    const Polygon l = l_polygon();
    const double r = 0.5;
    const PolyRegion out = offset_polygon(l, r, kArcTol);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> ux(-1.0, 4.0);
    int checked = 0;
    for (int i = 0; i < 5000; ++i) {
        const Vec2 p{ux(rng), ux(rng)};
        const bool inside_poly = oracle::point_in_polygon(p, l);
        const double d = inside_poly ? 0.0 : oracle::polygon_distance(p, l);
        if (std::abs(d - r) <= 4.0 * kArcTol) continue;  // boundary band
        CHECK(point_in_region(p, out) == (d < r));
        ++checked;
    }
    CHECK(checked > 4000);
}

TEST_CASE("boolean basics") {
    const PolyRegion a{{square2()}};
    SUBCASE("A minus A is empty") {
        CHECK(region_boolean(a, a, BoolOp::Subtract).empty());
    }
    SUBCASE("disjoint intersection is empty") {
        const PolyRegion b{{make_rect_polygon({5, 5}, {6, 6})}};
        CHECK(region_boolean(a, b, BoolOp::Intersect).empty());
    }
    SUBCASE("unit squares overlapping by 0.5 in x") {
        const PolyRegion u1{{make_rect_polygon({0, 0}, {1, 1})}};
        const PolyRegion u2{{make_rect_polygon({0.5, 0}, {1.5, 1})}};
        CHECK(region_boolean(u1, u2, BoolOp::Intersect).area() == doctest::Approx(0.5));
    }
}

TEST_CASE("union area obeys inclusion-exclusion on random rectangles") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_real_distribution<double> w(0.2, 2.5);
    for (int iter = 0; iter < 200; ++iter) {
        const Vec2 a0{u(rng), u(rng)};
        const Vec2 b0{u(rng), u(rng)};
        const PolyRegion a{{make_rect_polygon(a0, a0 + Vec2{w(rng), w(rng)})}};
        const PolyRegion b{{make_rect_polygon(b0, b0 + Vec2{w(rng), w(rng)})}};
        const double lhs = region_boolean(a, b, BoolOp::Union).area();
        const double rhs = a.area() + b.area() - region_boolean(a, b, BoolOp::Intersect).area();
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
}

TEST_CASE("disc overlap and tangency") {
    const double rho = 0.5;
    const double eps = 1e-9;
    const Disc a{{0, 0}, rho};
    SUBCASE("tangent at distance 2*rho") {
        const Disc b{{2 * rho, 0}, rho};
        CHECK_FALSE(discs_overlap(a, b, eps));
        CHECK(discs_tangent(a, b, eps));
    }
    SUBCASE("identical centers overlap") {
        const Disc b{{0, 0}, rho};
        CHECK(discs_overlap(a, b, eps));
        CHECK_FALSE(discs_tangent(a, b, eps));
    }
    SUBCASE("distance 2*rho + 10*eps is neither") {
        const Disc b{{2 * rho + 10 * eps, 0}, rho};
        CHECK_FALSE(discs_overlap(a, b, eps));
        CHECK_FALSE(discs_tangent(a, b, eps));
    }
}

TEST_CASE("capsule hull") {
    const double rho = 0.5;
    SUBCASE("coincident centers degenerate to a disc") {
        const Capsule c = capsule_hull(Disc{{1, 1}, rho}, Disc{{1, 1}, rho});
        CHECK(c.is_disc(1e-12));
        CHECK(c.area() == doctest::Approx(M_PI * rho * rho));
    }
    SUBCASE("centers 2*rho apart") {
        const Capsule c = capsule_hull(Disc{{0, 0}, rho}, Disc{{2 * rho, 0}, rho});
        CHECK(c.area() == doctest::Approx(M_PI * rho * rho + 4 * rho * rho));
    }
    SUBCASE("hull contains both generating discs") {
        const Disc a{{0, 0}, rho}, b{{0.7, 0.4}, rho};
        const Capsule c = capsule_hull(a, b);
        for (int i = 0; i < 64; ++i) {
            const double t = 2 * M_PI * i / 64;
            const Vec2 dir{std::cos(t), std::sin(t)};
            CHECK(c.contains(a.center + (rho - 1e-12) * dir, 1e-9));
            CHECK(c.contains(b.center + (rho - 1e-12) * dir, 1e-9));
        }
    }
    SUBCASE("mismatched radii rejected") {
        CHECK_THROWS_AS(capsule_hull(Disc{{0, 0}, 0.5}, Disc{{1, 0}, 0.6}), GeometryError);
    }
    SUBCASE("capsule of a disc with itself equals the disc as a region") {
        const Disc a{{0.3, -0.2}, rho};
        const Capsule c = capsule_hull(a, a);
        const PolyRegion rc{{make_capsule_polygon(c, kArcTol)}};
        const PolyRegion rd{{make_disc_polygon(a, kArcTol)}};
        const double sym = region_boolean(region_boolean(rc, rd, BoolOp::Subtract),
                                          region_boolean(rd, rc, BoolOp::Subtract), BoolOp::Union)
                               .area();
        CHECK(sym / rd.area() < 1e-3);
    }
}

TEST_CASE("disc_in_region three-way classification") {
    const PolyRegion big{{make_rect_polygon({0, 0}, {10, 10})}};
    const double eps = 1e-9;
    CHECK(disc_in_region(Disc{{5, 5}, 1.0}, big, eps) == Containment::Contained);
    CHECK(disc_in_region(Disc{{0.2, 5}, 1.0}, big, eps) == Containment::Intersects);
    CHECK(disc_in_region(Disc{{-5, 5}, 1.0}, big, eps) == Containment::Disjoint);
    SUBCASE("disc straddling from outside intersects") {
        CHECK(disc_in_region(Disc{{-0.5, 5}, 1.0}, big, eps) == Containment::Intersects);
    }
}

TEST_CASE("ray_boundary_hit") {
    const PolyRegion sq{{square2()}};
    auto t = ray_boundary_hit({0, 0}, {1, 0}, sq);
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(1.0));
    CHECK_FALSE(ray_boundary_hit({5, 5}, {1, 0}, sq).has_value());
    SUBCASE("t_min skips the near wall") {
        auto t2 = ray_boundary_hit({-2, 0}, {1, 0}, sq, 1.5);
        REQUIRE(t2.has_value());
        CHECK(*t2 == doctest::Approx(3.0));
    }
}

TEST_CASE("connected_components groups touching parts") {
    PolyRegion r;
    r.parts.push_back(make_rect_polygon({0, 0}, {1, 1}));
    r.parts.push_back(make_rect_polygon({1, 0}, {2, 1}));  // shares an edge
    r.parts.push_back(make_rect_polygon({5, 5}, {6, 6}));
    const auto comps = connected_components(r, 1e-9);
    CHECK(comps.size() == 2);
}

TEST_CASE("validate_polygon rejects malformed input") {
    SUBCASE("too few vertices") {
        Polygon p;
        p.exterior = {{0, 0}, {1, 0}};
        CHECK_THROWS_AS(validate_polygon(p), GeometryError);
    }
    SUBCASE("clockwise exterior") {
        Polygon p;
        p.exterior = {{0, 0}, {0, 1}, {1, 1}, {1, 0}};
        CHECK_THROWS_AS(validate_polygon(p), GeometryError);
    }
    SUBCASE("self-intersecting bowtie") {
        Polygon p;
        p.exterior = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
        CHECK_THROWS_AS(validate_polygon(p), GeometryError);
    }
    SUBCASE("non-finite coordinate") {
        Polygon p;
        p.exterior = {{0, 0}, {1, 0}, {std::nan(""), 1}};
        CHECK_THROWS_AS(validate_polygon(p), GeometryError);
    }
    SUBCASE("offset rejects invalid polygons") {
        Polygon p;
        p.exterior = {{0, 0}, {1, 1}, {1, 0}, {0, 1}};
        CHECK_THROWS_AS(offset_polygon(p, 0.1, kArcTol), GeometryError);
    }
}

TEST_CASE("circle_segments tightens with tolerance") {
    const int coarse = circle_segments(1.0, 1e-2);
    const int fine = circle_segments(1.0, 1e-5);
    CHECK(fine > coarse);
    CHECK(coarse >= 8);
}
