// Shared environments used by unit tests, the acceptance suite, and
// benchmarks. rho = 0.5 throughout so gap multiples stay exact in binary.
#pragma once

#include <cmath>
#include <vector>

#include "flowpact/partition.hpp"

namespace corpus {

using flowpact::Environment;
using flowpact::Polygon;
using flowpact::Vec2;
using flowpact::make_rect_polygon;

constexpr double kRho = 0.5;
constexpr double kVmax = 1.0;

inline Environment empty_box() {
    Environment env;
    env.perimeter = make_rect_polygon({-6, -6}, {6, 6});
    env.rho = kRho;
    env.vmax = kVmax;
    return env;
}

inline Environment lone_obstacle() {
    Environment env = empty_box();
    env.obstacles.push_back(make_rect_polygon({-1, -1}, {1, 1}));
    return env;
}

/// Two 2x2 squares separated by `gap` along x, in a box that keeps the walls
/// out of interaction range.
inline Environment two_obstacles(double gap) {
    Environment env;
    env.perimeter = make_rect_polygon({-7, -5}, {7, 5});
    env.obstacles.push_back(make_rect_polygon({-2 - gap / 2, -1}, {-gap / 2, 1}));
    env.obstacles.push_back(make_rect_polygon({gap / 2, -1}, {2 + gap / 2, 1}));
    env.rho = kRho;
    env.vmax = kVmax;
    return env;
}

/// Two loops sharing a single-lane neck of width 2*rho. Corridors around the
/// holes are 4.4*rho wide so their middles stay open space.
inline Environment figure8() {
    Environment env;
    env.perimeter = make_rect_polygon({-4.7, -3.7}, {4.7, 3.7});
    env.obstacles.push_back(make_rect_polygon({-2.5, -1.5}, {-0.5, 1.5}));
    env.obstacles.push_back(make_rect_polygon({0.5, -1.5}, {2.5, 1.5}));
    env.rho = kRho;
    env.vmax = kVmax;
    return env;
}

/// Several obstacles exercising every pipeline stage at once: an isolated
/// block, an annexation pair (gap 2.5*rho), and a single-lane pair (gap 2*rho).
inline Environment multi_obstacle() {
    Environment env;
    env.perimeter = make_rect_polygon({-9, -6}, {9, 6});
    env.obstacles.push_back(make_rect_polygon({-7, -4}, {-5, -2}));    // isolated
    env.obstacles.push_back(make_rect_polygon({-7, 0.625}, {-5, 2.625}));  // annex pair with next
    env.obstacles.push_back(make_rect_polygon({-5 + 1.25, 0.625}, {-3 + 1.25, 2.625}));
    env.obstacles.push_back(make_rect_polygon({2, -3}, {4, -1}));      // lane pair with next
    env.obstacles.push_back(make_rect_polygon({5, -3}, {7, -1}));
    env.rho = kRho;
    env.vmax = kVmax;
    return env;
}

/// Invalid: an obstacle within 2*rho of the wall pinches the corridor.
inline Environment pinched() {
    Environment env;
    env.perimeter = make_rect_polygon({-5, -5}, {5, 5});
    env.obstacles.push_back(make_rect_polygon({-4.2, -1}, {-2.2, 1}));  // 0.8 < 2*rho from wall
    env.rho = kRho;
    env.vmax = kVmax;
    return env;
}

inline Polygon rotated_rect(Vec2 center, double w, double h, double angle) {
    Polygon p;
    const Vec2 ex = flowpact::rotate({1, 0}, angle);
    const Vec2 ey = flowpact::rotate({0, 1}, angle);
    p.exterior = {
        center - ex * (w / 2) - ey * (h / 2),
        center + ex * (w / 2) - ey * (h / 2),
        center + ex * (w / 2) + ey * (h / 2),
        center - ex * (w / 2) + ey * (h / 2),
    };
    return p;
}

/// Three rectangles around the origin whose pairwise gaps are exactly 2*rho,
/// meeting in a Y of three single lanes.
inline Environment y_junction() {
    Environment env;
    env.perimeter = make_rect_polygon({-9, -9}, {9, 9});
    // long axes radial at 90 / 210 / 330 degrees; distance chosen by bisection
    const double angles[3] = {M_PI / 2, M_PI / 2 + 2 * M_PI / 3, M_PI / 2 + 4 * M_PI / 3};
    auto build = [&](double d) {
        std::vector<Polygon> obs;
        for (double a : angles) {
            const Vec2 c = flowpact::rotate({1, 0}, a) * d;
            obs.push_back(rotated_rect(c, 2.0, 3.0, a + M_PI / 2));
        }
        return obs;
    };
    double lo = 1.0, hi = 5.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = (lo + hi) / 2;
        auto obs = build(mid);
        const double gap =
            flowpact::region_distance(flowpact::PolyRegion{{obs[0]}}, flowpact::PolyRegion{{obs[1]}});
        (gap < 2 * kRho ? lo : hi) = mid;
    }
    env.obstacles = build(hi);
    env.rho = kRho;
    env.vmax = kVmax;
    return env;
}

struct NamedEnvironment {
    const char* name;
    Environment env;
};

/// The acceptance corpus: every environment must partition and validate.
inline std::vector<NamedEnvironment> acceptance_corpus() {
    return {
        {"empty_box", empty_box()},
        {"lone_obstacle", lone_obstacle()},
        {"two_obstacles_gap_3rho", two_obstacles(3 * kRho)},
        {"two_obstacles_gap_2.5rho", two_obstacles(2.5 * kRho)},
        {"two_obstacles_gap_2rho", two_obstacles(2 * kRho)},
        {"figure8", figure8()},
        {"multi_obstacle", multi_obstacle()},
    };
}

}  // namespace corpus
