#include "flowpact/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace flowpact {
namespace {

constexpr double kDirectionDotSlack = 0.1;

// --- generator helpers --------------------------------------------------
//
// Generators are the flow generating objects: the perimeter (id 0) and each
// obstacle (id i+1). Distances to the perimeter are measured to its boundary
// polyline, distances to obstacles to the solid polygon.

const Polygon& generator_polygon(const Environment& env, GeneratorId g) {
    if (g == kPerimeterGenerator) return env.perimeter;
    return env.obstacles[static_cast<size_t>(g - 1)];
}

double generator_distance(const Environment& env, GeneratorId g, Vec2 p) {
    const Polygon& poly = generator_polygon(env, g);
    const PolyRegion r{{poly}};
    if (g != kPerimeterGenerator && point_in_region(p, r)) return 0.0;
    return boundary_distance(p, r);
}

Vec2 generator_nearest_point(const Environment& env, GeneratorId g, Vec2 p) {
    return nearest_boundary_point(p, PolyRegion{{generator_polygon(env, g)}});
}

double generator_pair_distance(const Environment& env, GeneratorId a, GeneratorId b) {
    const Polygon& pa = generator_polygon(env, a);
    const Polygon& pb = generator_polygon(env, b);
    if (a != kPerimeterGenerator && b != kPerimeterGenerator) {
        return region_distance(PolyRegion{{pa}}, PolyRegion{{pb}});
    }
    // perimeter involved: measure to its boundary ring, not its interior
    const Polygon& peri = (a == kPerimeterGenerator) ? pa : pb;
    const Polygon& obst = (a == kPerimeterGenerator) ? pb : pa;
    double best = std::numeric_limits<double>::max();
    auto rings_of = [](const Polygon& p) {
        std::vector<const std::vector<Vec2>*> rs{&p.exterior};
        for (const auto& h : p.holes) rs.push_back(&h);
        return rs;
    };
    for (const auto* ra : rings_of(peri))
        for (const auto* rb : rings_of(obst))
            for (size_t i = 0; i < ra->size(); ++i)
                for (size_t j = 0; j < rb->size(); ++j)
                    best = std::min(best, segment_distance((*ra)[i], (*ra)[(i + 1) % ra->size()],
                                                           (*rb)[j], (*rb)[(j + 1) % rb->size()]));
    return best;
}

// Free-space points within `radius` of the generator.
PolyRegion generator_reach(const PartitionBuild& b, GeneratorId g, double radius) {
    if (g == kPerimeterGenerator) {
        const PolyRegion peri{{b.env.perimeter}};
        const PolyRegion shrunk = erode(peri, radius, b.tol.arc_tol);
        const PolyRegion band = region_boolean(peri, shrunk, BoolOp::Subtract);
        return region_boolean(band, b.free_space, BoolOp::Intersect, b.tol.eps_geom);
    }
    const PolyRegion grown = offset_polygon(generator_polygon(b.env, g), radius, b.tol.arc_tol);
    return region_boolean(grown, b.free_space, BoolOp::Intersect, b.tol.eps_geom);
}

struct ReachCache {
    const PartitionBuild& build;
    std::map<std::pair<GeneratorId, long>, PolyRegion> cache;

    const PolyRegion& get(GeneratorId g, double radius) {
        const long key = std::lround(radius * 1e9);
        auto it = cache.find({g, key});
        if (it == cache.end())
            it = cache.emplace(std::make_pair(g, key), generator_reach(build, g, radius)).first;
        return it->second;
    }
};

std::vector<GeneratorId> all_generators(const Environment& env) {
    std::vector<GeneratorId> out{kPerimeterGenerator};
    for (size_t i = 0; i < env.obstacles.size(); ++i) out.push_back(static_cast<GeneratorId>(i + 1));
    return out;
}

// --- equidistant midline tracing -----------------------------------------

struct MidlineResult {
    std::vector<Vec2> points;
    bool closed = false;
};

Vec2 bisector_normal(const Environment& env, GeneratorId g1, GeneratorId g2, Vec2 p) {
    const Vec2 q1 = generator_nearest_point(env, g1, p);
    const Vec2 q2 = generator_nearest_point(env, g2, p);
    Vec2 n1 = p - q1;
    Vec2 n2 = p - q2;
    if (n1.norm() < 1e-12 || n2.norm() < 1e-12) return {0, 0};
    return n1.normalized() - n2.normalized();
}

// Pull p onto the d1==d2 curve along the gradient of (d1 - d2).
bool bisector_correct(const Environment& env, GeneratorId g1, GeneratorId g2, Vec2& p, double tol) {
    for (int it = 0; it < 24; ++it) {
        const double f = generator_distance(env, g1, p) - generator_distance(env, g2, p);
        if (std::abs(f) <= tol) return true;
        const Vec2 g = bisector_normal(env, g1, g2, p);
        const double gn2 = g.norm2();
        if (gn2 < 1e-12) return false;
        p -= g * (f / gn2);
    }
    return std::abs(generator_distance(env, g1, p) - generator_distance(env, g2, p)) <= 4 * tol;
}

MidlineResult trace_midline(const PartitionBuild& b, GeneratorId g1, GeneratorId g2, Vec2 seed,
                            double stop_distance) {
    const Environment& env = b.env;
    const double h = b.env.rho / 8.0;
    const double tol = b.env.rho * 1e-9;
    Vec2 p0 = seed;
    if (!bisector_correct(env, g1, g2, p0, tol)) return {};

    auto tangent_at = [&](Vec2 p, Vec2 prev_dir) {
        Vec2 n = bisector_normal(env, g1, g2, p);
        if (n.norm() < 1e-9) return prev_dir;
        Vec2 t = n.perp().normalized();
        if (prev_dir.norm2() > 0 && t.dot(prev_dir) < 0) t = -t;
        return t;
    };

    auto in_bounds = [&](Vec2 p) {
        return point_in_region(p, b.free_space) &&
               std::max(generator_distance(env, g1, p), generator_distance(env, g2, p)) <=
                   stop_distance;
    };

    const size_t max_steps = static_cast<size_t>(b.free_space.boundary_length() * 4.0 / h) + 64;

    auto march = [&](Vec2 start, Vec2 dir0) {
        std::vector<Vec2> pts;
        Vec2 p = start;
        Vec2 dir = dir0;
        for (size_t step = 0; step < max_steps; ++step) {
            Vec2 next = p + dir * h;
            if (!bisector_correct(env, g1, g2, next, tol)) break;
            if (!in_bounds(next)) break;
            const Vec2 t = tangent_at(next, dir);
            if (t.norm2() == 0) break;
            pts.push_back(next);
            dir = t;
            p = next;
            if (step > 8 && distance(p, start) < 0.75 * h) break;  // loop closed
        }
        return pts;
    };

    const Vec2 t0 = tangent_at(p0, {0, 0});
    if (t0.norm2() == 0) return {};
    std::vector<Vec2> fwd = march(p0, t0);
    // closed loop: forward march came back to the start
    if (!fwd.empty() && distance(fwd.back(), p0) < 1.5 * h && fwd.size() > 8) {
        MidlineResult r;
        r.points = std::move(fwd);
        r.points.insert(r.points.begin(), p0);
        r.closed = true;
        return r;
    }
    std::vector<Vec2> bwd = march(p0, -t0);
    MidlineResult r;
    r.points.assign(bwd.rbegin(), bwd.rend());
    r.points.push_back(p0);
    r.points.insert(r.points.end(), fwd.begin(), fwd.end());
    return r;
}

double polyline_length(const std::vector<Vec2>& pts) {
    double acc = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) acc += distance(pts[i], pts[i + 1]);
    return acc;
}

Vec2 polyline_at(const std::vector<Vec2>& pts, double s) {
    double acc = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const double seg = distance(pts[i], pts[i + 1]);
        if (acc + seg >= s && seg > 0) return pts[i] + (pts[i + 1] - pts[i]) * ((s - acc) / seg);
        acc += seg;
    }
    return pts.back();
}

// --- misc ---------------------------------------------------------------

double free_clearance(const PartitionBuild& b, Vec2 p) {
    if (!point_in_region(p, b.free_space)) return -boundary_distance(p, b.free_space);
    return boundary_distance(p, b.free_space);
}

GeneratorRing* ring_of(PartitionBuild& b, GeneratorId g) {
    for (auto& r : b.rings)
        if (r.generator == g) return &r;
    return nullptr;
}

// Union of regions with disjoint interiors. Coincident boundaries can make
// the boolean kernel emit garbage on degenerate input, so the result is
// verified; on failure the parts are appended directly, which is equivalent
// for interior-disjoint operands.
PolyRegion disjoint_union(const PolyRegion& a, const PolyRegion& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    PolyRegion u = region_boolean(a, b, BoolOp::Union);
    const double expect = a.area() + b.area();
    if (u.area() >= expect * (1.0 - 1e-6) - 1e-12) return u;
    PolyRegion appended = a;
    appended.parts.insert(appended.parts.end(), b.parts.begin(), b.parts.end());
    return appended;
}

}  // namespace

Tolerances Tolerances::derive(double environment_diameter, double rho) {
    Tolerances t;
    t.eps_geom = 1e-9 * environment_diameter;
    t.eps_area = 1e-6;
    t.arc_tol = rho / 100.0;
    t.eps_lane = 1e-6 * rho;
    return t;
}

void validate_environment(const Environment& env) {
    if (env.rho <= 0.0) throw EnvironmentInvalid("robot radius must be positive");
    if (env.vmax <= 0.0) throw EnvironmentInvalid("speed cap must be positive");
    validate_polygon(env.perimeter);
    if (!env.perimeter.holes.empty())
        throw EnvironmentInvalid("perimeter must be a simple polygon without holes");
    const PolyRegion peri{{env.perimeter}};
    for (size_t i = 0; i < env.obstacles.size(); ++i) {
        const std::string tag = "obstacle " + std::to_string(i);
        try {
            validate_polygon(env.obstacles[i]);
        } catch (const GeometryError& e) {
            throw EnvironmentInvalid(tag + ": " + e.what());
        }
        if (!env.obstacles[i].holes.empty())
            throw EnvironmentInvalid(tag + ": obstacles must not have holes");
        for (const Vec2& v : env.obstacles[i].exterior)
            if (!point_in_region(v, peri))
                throw EnvironmentInvalid(tag + " is not inside the perimeter");
        if (generator_pair_distance(env, kPerimeterGenerator, static_cast<GeneratorId>(i + 1)) <= 0.0)
            throw EnvironmentInvalid(tag + " touches the perimeter");
    }
    for (size_t i = 0; i < env.obstacles.size(); ++i)
        for (size_t j = i + 1; j < env.obstacles.size(); ++j)
            if (region_distance(PolyRegion{{env.obstacles[i]}}, PolyRegion{{env.obstacles[j]}}) <= 0.0)
                throw EnvironmentInvalid("obstacles " + std::to_string(i) + " and " +
                                         std::to_string(j) + " overlap or touch");
}

PolyRegion free_space_of(const Environment& env) {
    PolyRegion f{{env.perimeter}};
    for (const Polygon& o : env.obstacles)
        f = region_boolean(f, PolyRegion{{o}}, BoolOp::Subtract);
    return f;
}

PartitionBuild begin_partition(const Environment& env) {
    validate_environment(env);
    PartitionBuild b;
    b.env = env;
    b.tol = Tolerances::derive(env.diameter(), env.rho);
    b.free_space = free_space_of(env);
    return b;
}

std::vector<CorridorSample> corridor_clearance_samples(const Environment& env, double spacing) {
    const PolyRegion fs = free_space_of(env);
    std::vector<CorridorSample> out;
    const double push_off = env.rho * 1e-7;
    auto sample_ring = [&](const std::vector<Vec2>& ring, bool inward_normal) {
        for (size_t i = 0; i < ring.size(); ++i) {
            const Vec2 a = ring[i];
            const Vec2 bpt = ring[(i + 1) % ring.size()];
            const double len = distance(a, bpt);
            if (len < 1e-12) continue;
            const Vec2 dir = (bpt - a) / len;
            // ccw ring: interior on the left; free side of an obstacle is right
            Vec2 n = inward_normal ? dir.perp() : dir.perp_cw();
            const int steps = std::max(1, static_cast<int>(len / spacing));
            for (int k = 0; k < steps; ++k) {
                const Vec2 at = a + dir * ((k + 0.5) * len / steps);
                const Vec2 origin = at + n * push_off;
                if (!point_in_region(origin, fs)) continue;
                const auto t = ray_boundary_hit(origin, n, fs, 0.0);
                if (!t) continue;
                out.push_back({at, *t + push_off});
            }
        }
    };
    sample_ring(env.perimeter.exterior, /*inward_normal=*/true);
    for (const Polygon& o : env.obstacles) sample_ring(o.exterior, /*inward_normal=*/false);
    return out;
}

void build_initial_flow_regions(PartitionBuild& b) {
    const auto gens = all_generators(b.env);
    // pinched corridors: any pair of generators closer than one robot width
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = i + 1; j < gens.size(); ++j) {
            const double d = generator_pair_distance(b.env, gens[i], gens[j]);
            if (d < 2.0 * b.env.rho - b.tol.eps_lane) {
                std::ostringstream msg;
                msg << "flow rings of generators " << gens[i] << " and " << gens[j]
                    << " collide: gap " << d << " is narrower than one robot (" << 2 * b.env.rho
                    << ")";
                throw EnvironmentInvalid(msg.str());
            }
        }
    // self-pinch: corridor clearance sampled around every generator boundary
    for (const CorridorSample& s : corridor_clearance_samples(b.env, b.env.rho / 4.0)) {
        if (s.clearance < 2.0 * b.env.rho - std::max(b.tol.eps_lane, b.env.rho * 1e-6)) {
            std::ostringstream msg;
            msg << "flow ring self-intersects: corridor at (" << s.at.x << ", " << s.at.y
                << ") is only " << s.clearance << " wide";
            throw EnvironmentInvalid(msg.str());
        }
    }
    b.rings.clear();
    for (GeneratorId g : gens) b.rings.push_back({g, generator_reach(b, g, b.env.rho)});
}

void build_single_lane_regions(PartitionBuild& b) {
    const auto gens = all_generators(b.env);
    const double rho = b.env.rho;
    const double lane_pad = 4.0 * b.tol.arc_tol + 2.0 * b.tol.eps_lane;
    ReachCache reach{b, {}};

    b.lanes.clear();
    for (size_t i = 0; i < gens.size(); ++i) {
        for (size_t j = i + 1; j < gens.size(); ++j) {
            const double d = generator_pair_distance(b.env, gens[i], gens[j]);
            if (std::abs(d - 2.0 * rho) > b.tol.eps_lane) continue;  // not a contact pair
            const PolyRegion zone = region_boolean(reach.get(gens[i], 2 * rho + lane_pad),
                                                   reach.get(gens[j], 2 * rho + lane_pad),
                                                   BoolOp::Intersect, b.tol.eps_geom);
            const PolyRegion contact = region_boolean(reach.get(gens[i], rho + lane_pad),
                                                      reach.get(gens[j], rho + lane_pad),
                                                      BoolOp::Intersect, b.tol.eps_geom);
            if (zone.empty() || contact.empty()) continue;
            for (const PolyRegion& comp : connected_components(zone, b.tol.eps_geom)) {
                const PolyRegion touch = region_boolean(comp, contact, BoolOp::Intersect);
                if (touch.area() <= 0.0) continue;
                LaneDraft lane;
                lane.generators = {gens[i], gens[j]};
                lane.geometry = comp;
                // seed the midline from a genuine contact point
                Vec2 seed = touch.parts.front().exterior.front();
                Vec2 centroid{0, 0};
                for (const Vec2& v : touch.parts.front().exterior) centroid += v;
                seed = centroid / static_cast<double>(touch.parts.front().exterior.size());
                MidlineResult mid = trace_midline(b, gens[i], gens[j], seed, 2 * rho + lane_pad);
                if (mid.points.size() < 2) continue;
                lane.midline = std::move(mid.points);
                lane.closed = mid.closed;

                // the lane joins the two generating objects at the ends of the
                // overlap: trim the midline to true corridor cross-sections
                // (generator normals antiparallel) and cut the lens there
                if (!lane.closed) {
                    auto antiparallel = [&](Vec2 q) {
                        const Vec2 ua = q - generator_nearest_point(b.env, gens[i], q);
                        const Vec2 ub = q - generator_nearest_point(b.env, gens[j], q);
                        if (ua.norm() < 1e-12 || ub.norm() < 1e-12) return false;
                        return ua.normalized().dot(ub.normalized()) <= -0.8;
                    };
                    size_t lo = 0, hi = lane.midline.size();
                    while (lo < hi && !antiparallel(lane.midline[lo])) ++lo;
                    while (hi > lo && !antiparallel(lane.midline[hi - 1])) --hi;
                    if (hi - lo < 2) continue;  // no corridor core: spurious contact
                    lane.midline.assign(lane.midline.begin() + lo, lane.midline.begin() + hi);

                    const double big = 4.0 * b.env.diameter();
                    const double cut_slack = 0.02 * rho;
                    auto cut_beyond = [&](Vec2 end, Vec2 inward) {
                        const Vec2 out = (-inward).normalized();
                        const Vec2 base = end + out * cut_slack;
                        const Vec2 side = out.perp();
                        Polygon rect;
                        rect.exterior = {base - side * big, base + side * big,
                                         base + side * big + out * big,
                                         base - side * big + out * big};
                        if (rect.area() < 0) std::reverse(rect.exterior.begin(), rect.exterior.end());
                        lane.geometry = region_boolean(lane.geometry, PolyRegion{{rect}},
                                                       BoolOp::Subtract, b.tol.eps_geom);
                    };
                    cut_beyond(lane.midline.front(), lane.midline[1] - lane.midline.front());
                    cut_beyond(lane.midline.back(),
                               lane.midline[lane.midline.size() - 2] - lane.midline.back());
                    if (lane.geometry.empty()) continue;
                }
                b.lanes.push_back(std::move(lane));
            }
        }
    }
    // the lane replaces the overlapping ring portions
    for (auto& ring : b.rings)
        for (const auto& lane : b.lanes)
            ring.geometry = region_boolean(ring.geometry, lane.geometry, BoolOp::Subtract,
                                           b.tol.eps_geom);
}

void build_inflated_flow_regions(PartitionBuild& b) {
    const auto gens = all_generators(b.env);
    const double rho = b.env.rho;
    ReachCache reach{b, {}};
    constexpr int kLevels = 24;

    PolyRegion claimed;  // already assigned strip area (pair order is deterministic)
    for (const auto& lane : b.lanes)
        claimed = region_boolean(claimed, lane.geometry, BoolOp::Union);

    for (size_t i = 0; i < gens.size(); ++i) {
        for (size_t j = i + 1; j < gens.size(); ++j) {
            const double d = generator_pair_distance(b.env, gens[i], gens[j]);
            if (d <= 2.0 * rho + b.tol.eps_lane || d >= 3.0 * rho) continue;
            PolyRegion strip = region_boolean(reach.get(gens[i], 1.5 * rho),
                                              reach.get(gens[j], 1.5 * rho), BoolOp::Intersect,
                                              b.tol.eps_geom);
            for (const auto& ring : b.rings)
                strip = region_boolean(strip, ring.geometry, BoolOp::Subtract, b.tol.eps_geom);
            strip = region_boolean(strip, claimed, BoolOp::Subtract, b.tol.eps_geom);
            if (strip.empty()) continue;

            // split along the equidistant curve: a point joins generator i's
            // half iff some level radius separates d_i from d_j; the d/2
            // level makes the split exact where the gap is uniform
            std::vector<double> levels;
            for (int k = 0; k < kLevels; ++k) levels.push_back(rho + (k + 0.5) / kLevels * 0.5 * rho);
            if (d / 2 > rho && d / 2 < 1.5 * rho) levels.push_back(d / 2);
            PolyRegion half_i;
            for (double r : levels) {
                const PolyRegion ring_band = region_boolean(reach.get(gens[i], r),
                                                            reach.get(gens[j], r), BoolOp::Subtract);
                half_i = region_boolean(half_i, ring_band, BoolOp::Union);
            }
            half_i = region_boolean(strip, half_i, BoolOp::Intersect, b.tol.eps_geom);
            const PolyRegion half_j = region_boolean(strip, half_i, BoolOp::Subtract, b.tol.eps_geom);

            if (auto* ri = ring_of(b, gens[i])) ri->geometry = disjoint_union(ri->geometry, half_i);
            if (auto* rj = ring_of(b, gens[j])) rj->geometry = disjoint_union(rj->geometry, half_j);
            claimed = region_boolean(claimed, strip, BoolOp::Union);
        }
    }
}

void place_passage_regions(PartitionBuild& b) {
    const double rho = b.env.rho;
    b.passage_spots.clear();

    auto fits = [&](Vec2 c) { return free_clearance(b, c) >= rho - 10 * b.tol.eps_geom; };

    std::vector<Vec2> proposals;

    // both ends of every single-lane region
    for (const auto& lane : b.lanes) {
        if (lane.closed || lane.midline.size() < 2) continue;
        const double len = polyline_length(lane.midline);
        auto place_from = [&](bool from_start) {
            // walk inward from the end until the spot fits in free space
            for (double s = 0.0; s <= len; s += rho / 16.0) {
                const double arc = from_start ? s : len - s;
                const Vec2 c = polyline_at(lane.midline, arc);
                if (fits(c)) {
                    proposals.push_back(c);
                    return true;
                }
            }
            return false;
        };
        const bool a = place_from(true);
        const bool c = place_from(false);
        if (!a || !c)
            throw EnvironmentInvalid("passage spot at a single-lane end does not fit in free space");
    }

    // points where three or more flow regions meet
    const double eps_meet = rho / 16.0;
    std::vector<const PolyRegion*> flows;
    for (const auto& r : b.rings)
        if (!r.geometry.empty()) flows.push_back(&r.geometry);
    for (const auto& l : b.lanes) flows.push_back(&l.geometry);

    std::vector<Vec2> candidates;
    for (const auto* f : flows) {
        for (const Polygon& part : f->parts) {
            auto sample_ring = [&](const std::vector<Vec2>& ring) {
                for (size_t i = 0; i < ring.size(); ++i) {
                    const Vec2 a = ring[i], bb = ring[(i + 1) % ring.size()];
                    const double seg = distance(a, bb);
                    const int n = std::max(1, static_cast<int>(seg / (rho / 8.0)));
                    for (int k = 0; k < n; ++k) {
                        const Vec2 p = a + (bb - a) * ((k + 0.5) / n);
                        int near = 0;
                        for (const auto* g : flows)
                            if (region_distance(p, *g) <= eps_meet) ++near;
                        if (near >= 3) candidates.push_back(p);
                    }
                }
            };
            sample_ring(part.exterior);
            for (const auto& h : part.holes) sample_ring(h);
        }
    }
    // cluster meet candidates into one proposal per junction
    std::vector<bool> used(candidates.size(), false);
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (used[i]) continue;
        Vec2 acc{0, 0};
        int count = 0;
        std::deque<size_t> queue{i};
        used[i] = true;
        while (!queue.empty()) {
            const size_t k = queue.front();
            queue.pop_front();
            acc += candidates[k];
            ++count;
            for (size_t m = 0; m < candidates.size(); ++m)
                if (!used[m] && distance(candidates[k], candidates[m]) < rho / 2) {
                    used[m] = true;
                    queue.push_back(m);
                }
        }
        proposals.push_back(acc / static_cast<double>(count));
    }

    // merge proposals whose discs would overlap, then fit each survivor
    std::vector<size_t> parent(proposals.size());
    std::iota(parent.begin(), parent.end(), size_t{0});
    std::function<size_t(size_t)> find = [&](size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (size_t i = 0; i < proposals.size(); ++i)
        for (size_t j = i + 1; j < proposals.size(); ++j)
            if (distance(proposals[i], proposals[j]) < 2 * rho * 1.005) parent[find(i)] = find(j);
    std::map<size_t, std::pair<Vec2, int>> groups;
    for (size_t i = 0; i < proposals.size(); ++i) {
        auto& g = groups[find(i)];
        g.first += proposals[i];
        g.second += 1;
    }
    for (const auto& [root, g] : groups) {
        Vec2 c = g.first / static_cast<double>(g.second);
        // nudge to fit: climb the free-space clearance field
        for (int it = 0; it < 32 && !fits(c); ++it) {
            Vec2 best = c;
            double best_cl = free_clearance(b, c);
            for (int k = 0; k < 8; ++k) {
                const double a = 2 * M_PI * k / 8;
                const Vec2 q = c + Vec2{std::cos(a), std::sin(a)} * (rho / 8.0);
                const double cl = free_clearance(b, q);
                if (cl > best_cl) {
                    best_cl = cl;
                    best = q;
                }
            }
            if (best == c) break;
            c = best;
        }
        if (!fits(c))
            throw EnvironmentInvalid("passage spot does not fit in free space");
        b.passage_spots.push_back({c, rho});
    }
    std::sort(b.passage_spots.begin(), b.passage_spots.end(), [](const Disc& a, const Disc& c) {
        return std::pair(a.center.x, a.center.y) < std::pair(c.center.x, c.center.y);
    });
}

void smooth_open_perimeter(PartitionBuild& b) {
    PolyRegion flow_all;
    for (const auto& r : b.rings) flow_all = region_boolean(flow_all, r.geometry, BoolOp::Union);
    for (const auto& l : b.lanes) flow_all = region_boolean(flow_all, l.geometry, BoolOp::Union);
    const PolyRegion open_draft =
        region_boolean(b.free_space, flow_all, BoolOp::Subtract, b.tol.eps_geom);
    if (open_draft.empty()) {
        b.smoothed = true;
        return;
    }
    // the opened region is exactly the set a rolling rho-disc can occupy;
    // everything else is where the disc would touch the boundary twice
    const PolyRegion opened = morphological_open(open_draft, b.env.rho, b.tol.arc_tol);
    PolyRegion slivers = region_boolean(open_draft, opened, BoolOp::Subtract, b.tol.eps_geom);
    // arc-discretization residue along coincident boundaries is not a notch
    const double min_sliver_area = b.env.rho * b.env.rho * 1e-4;
    std::erase_if(slivers.parts, [&](const Polygon& part) { return part.area() < min_sliver_area; });
    if (slivers.empty()) {
        b.smoothed = true;
        return;
    }

    struct Target {
        PolyRegion* geometry;
    };
    std::vector<Target> targets;
    for (auto& r : b.rings) targets.push_back({&r.geometry});
    for (auto& l : b.lanes) targets.push_back({&l.geometry});

    for (const PolyRegion& sliver : connected_components(slivers, b.tol.eps_geom)) {
        // attach to the flow region sharing the most boundary
        std::vector<int> votes(targets.size(), 0);
        for (const Polygon& part : sliver.parts) {
            for (size_t i = 0; i < part.exterior.size(); ++i) {
                const Vec2 a = part.exterior[i];
                const Vec2 bb = part.exterior[(i + 1) % part.exterior.size()];
                const Vec2 mid = (a + bb) / 2.0;
                for (size_t t = 0; t < targets.size(); ++t)
                    if (!targets[t].geometry->empty() &&
                        region_distance(mid, *targets[t].geometry) <= 100 * b.tol.eps_geom)
                        ++votes[t];
            }
        }
        size_t best = 0;
        bool any = false;
        for (size_t t = 0; t < targets.size(); ++t)
            if (votes[t] > (any ? votes[best] : -1)) {
                best = t;
                any = true;
            }
        if (!any) {
            // no contact votes (isolated pocket): nearest flow region
            double bd = std::numeric_limits<double>::max();
            for (size_t t = 0; t < targets.size(); ++t) {
                if (targets[t].geometry->empty()) continue;
                const double d = region_distance(*targets[t].geometry, sliver);
                if (d < bd) {
                    bd = d;
                    best = t;
                }
            }
        }
        *targets[best].geometry = disjoint_union(*targets[best].geometry, sliver);
    }
    b.smoothed = true;
}

Partition finalize_partition(PartitionBuild&& b) {
    Partition p;
    p.env = b.env;
    p.tol = b.tol;
    p.free_space = b.free_space;

    // passage geometry, carved out of every other region
    PolyRegion psi;
    for (const Disc& s : b.passage_spots) {
        const PolyRegion dp{{make_disc_polygon(s, b.tol.arc_tol)}};
        psi = region_boolean(psi, dp, BoolOp::Union);
    }
    psi = region_boolean(psi, b.free_space, BoolOp::Intersect, b.tol.eps_geom);

    RegionId next_id = 0;
    const double min_area = b.tol.eps_area * b.free_space.area();

    for (const auto& ring : b.rings) {
        if (ring.geometry.area() <= min_area) continue;
        FlowRegion fr;
        fr.extent = ring.geometry;
        fr.geometry = region_boolean(ring.geometry, psi, BoolOp::Subtract, b.tol.eps_geom);
        fr.generators = {ring.generator};
        fr.direction_generator = ring.generator;
        fr.kind = FlowKind::Annular;
        fr.id = next_id++;
        p.flow.push_back(std::move(fr));
    }
    // lanes may overlap each other near meets; lower-id lane keeps the overlap
    PolyRegion lane_claimed;
    for (const auto& lane : b.lanes) {
        PolyRegion geom = region_boolean(lane.geometry, lane_claimed, BoolOp::Subtract, b.tol.eps_geom);
        lane_claimed = region_boolean(lane_claimed, lane.geometry, BoolOp::Union);
        if (geom.area() <= min_area) continue;
        FlowRegion fr;
        fr.extent = geom;
        fr.geometry = region_boolean(geom, psi, BoolOp::Subtract, b.tol.eps_geom);
        fr.generators = {lane.generators[0], lane.generators[1]};
        fr.direction_generator = std::min(lane.generators[0], lane.generators[1]);
        fr.kind = FlowKind::SingleLane;
        fr.axis = lane.midline;
        fr.id = next_id++;
        p.flow.push_back(std::move(fr));
    }

    // open space: the remainder, grouped into connected components
    PolyRegion open_all = b.free_space;
    for (const auto& fr : p.flow) open_all = region_boolean(open_all, fr.extent, BoolOp::Subtract);
    open_all = region_boolean(open_all, psi, BoolOp::Subtract, b.tol.eps_geom);
    const double min_part_area = b.env.rho * b.env.rho * 1e-6;
    std::erase_if(open_all.parts, [&](const Polygon& part) { return part.area() <= min_part_area; });
    for (const PolyRegion& comp : connected_components(open_all, 10 * b.tol.eps_geom)) {
        OpenRegion orr;
        orr.geometry = comp;
        orr.id = next_id++;
        p.open.push_back(std::move(orr));
    }

    for (const Disc& s : b.passage_spots) {
        PassageRegion pr;
        pr.spot = s;
        pr.id = next_id++;
        p.passages.push_back(std::move(pr));
    }

    // adjacency over all regions
    const double eps_adj = 100 * b.tol.eps_geom;
    struct Entry {
        RegionId id;
        const PolyRegion* geom;
        const Disc* spot;
    };
    std::vector<Entry> entries;
    for (const auto& f : p.flow) entries.push_back({f.id, &f.extent, nullptr});
    for (const auto& o : p.open) entries.push_back({o.id, &o.geometry, nullptr});
    for (const auto& ps : p.passages) entries.push_back({ps.id, nullptr, &ps.spot});
    for (size_t i = 0; i < entries.size(); ++i) {
        for (size_t j = i + 1; j < entries.size(); ++j) {
            const Entry& a = entries[i];
            const Entry& c = entries[j];
            bool adj = false;
            if (a.geom && c.geom) {
                adj = region_distance(*a.geom, *c.geom) <= eps_adj;
            } else if (a.spot && c.spot) {
                adj = distance(a.spot->center, c.spot->center) <= a.spot->radius + c.spot->radius + eps_adj;
            } else {
                const Entry& g = a.geom ? a : c;
                const Entry& s = a.spot ? a : c;
                adj = region_distance(s.spot->center, *g.geom) <= s.spot->radius + eps_adj;
            }
            if (adj) p.adjacency.emplace_back(a.id, c.id);
        }
    }

    for (auto& ps : p.passages)
        for (const auto& f : p.flow)
            if (p.adjacent(ps.id, f.id)) ps.adjacent_flow_ids.push_back(f.id);

    p.flow_space_ = {};
    for (const auto& f : p.flow) p.flow_space_ = disjoint_union(p.flow_space_, f.extent);
    return p;
}

const FlowRegion* Partition::flow_by_id(RegionId id) const {
    for (const auto& f : flow)
        if (f.id == id) return &f;
    return nullptr;
}

const OpenRegion* Partition::open_by_id(RegionId id) const {
    for (const auto& o : open)
        if (o.id == id) return &o;
    return nullptr;
}

const PassageRegion* Partition::passage_by_id(RegionId id) const {
    for (const auto& ps : passages)
        if (ps.id == id) return &ps;
    return nullptr;
}

bool Partition::adjacent(RegionId a, RegionId b) const {
    if (a > b) std::swap(a, b);
    for (const auto& e : adjacency)
        if (e.first == a && e.second == b) return true;
    return false;
}

std::string to_string(const RegionState& rs) {
    switch (rs.kind) {
        case RegionStateKind::Passage: return "passage(" + std::to_string(rs.a) + ")";
        case RegionStateKind::Flow: return "flow(" + std::to_string(rs.a) + ")";
        case RegionStateKind::Open: return "open(" + std::to_string(rs.a) + ")";
        case RegionStateKind::Transitioning:
            return "transitioning(" + std::to_string(rs.a) + "," + std::to_string(rs.b) + ")";
    }
    return "?";
}

Vec2 flow_region_direction(const Partition& p, const FlowRegion& region, Vec2 pos) {
    const GeneratorId g = region.direction_generator;
    const Vec2 q = generator_nearest_point(p.env, g, pos);
    Vec2 u = pos - q;
    if (u.norm() < 1e-12) {
        // on the generator boundary; fall back to a nearby interior probe
        u = pos - generator_nearest_point(p.env, g, pos + Vec2{p.tol.eps_geom, p.tol.eps_geom});
        if (u.norm() < 1e-12) u = {1, 0};
    }
    u = u.normalized();
    Vec2 t = u.perp();  // ccw around an obstacle
    if (g == kPerimeterGenerator) t = -t;
    if (region.winding == Winding::Clockwise) t = -t;
    return t;
}

Vec2 flow_direction_at(const Partition& p, Vec2 pos) {
    const FlowRegion* best = nullptr;
    for (const auto& f : p.flow)
        if (point_in_region(pos, f.geometry)) {
            best = &f;
            break;  // regions are interior-disjoint; lowest id wins ties
        }
    if (!best) throw Error("flow_direction_at: point is not in flow space");
    return flow_region_direction(p, *best, pos);
}

void assign_flow_directions(Partition& p) {
    const size_t n = p.flow.size();
    if (n == 0) return;

    struct PairSamples {
        size_t a, b;
        std::vector<double> dots;  // dot(dir_a_ccw, dir_b_ccw) at shared boundary samples
    };
    std::vector<PairSamples> pairs;
    const double eps_pair = 200 * p.tol.eps_geom;
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            if (!p.adjacent(p.flow[i].id, p.flow[j].id)) continue;
            PairSamples ps{i, j, {}};
            for (const Polygon& part : p.flow[i].geometry.parts) {
                auto sample_ring = [&](const std::vector<Vec2>& ring) {
                    for (size_t k = 0; k < ring.size(); ++k) {
                        const Vec2 a = ring[k], bb = ring[(k + 1) % ring.size()];
                        const double seg = distance(a, bb);
                        const int steps = std::max(1, static_cast<int>(seg / (p.env.rho / 8)));
                        for (int s = 0; s < steps; ++s) {
                            const Vec2 q = a + (bb - a) * ((s + 0.5) / steps);
                            if (region_distance(q, p.flow[j].geometry) > eps_pair) continue;
                            FlowRegion fa = p.flow[i];
                            FlowRegion fb = p.flow[j];
                            fa.winding = Winding::CounterClockwise;
                            fb.winding = Winding::CounterClockwise;
                            ps.dots.push_back(flow_region_direction(p, fa, q)
                                                  .dot(flow_region_direction(p, fb, q)));
                        }
                    }
                };
                sample_ring(part.exterior);
                for (const auto& h : part.holes) sample_ring(h);
            }
            if (!ps.dots.empty()) pairs.push_back(std::move(ps));
        }
    }

    // a single lane is one corridor shared by both generators: its direction
    // must agree with each generator's winding as felt along the lane axis
    for (size_t li = 0; li < n; ++li) {
        const FlowRegion& lane = p.flow[li];
        if (lane.kind != FlowKind::SingleLane || lane.axis.size() < 2) continue;
        for (GeneratorId g : lane.generators) {
            size_t other = n;
            for (size_t k = 0; k < n; ++k)
                if (p.flow[k].kind == FlowKind::Annular && p.flow[k].direction_generator == g)
                    other = k;
            if (other == n) continue;
            PairSamples ps{std::min(li, other), std::max(li, other), {}};
            FlowRegion as_lane = lane;
            as_lane.winding = Winding::CounterClockwise;
            FlowRegion as_gen = lane;
            as_gen.direction_generator = g;
            as_gen.winding = Winding::CounterClockwise;
            const size_t stride = std::max<size_t>(1, lane.axis.size() / 16);
            for (size_t m = 0; m < lane.axis.size(); m += stride) {
                const Vec2 q = lane.axis[m];
                // only true corridor cross-sections bind: the generators must
                // face each other across the axis, not wrap around lane ends
                const Vec2 ua = (q - generator_nearest_point(p.env, lane.generators[0], q));
                const Vec2 ub = (q - generator_nearest_point(p.env, lane.generators[1], q));
                if (ua.norm() < 1e-12 || ub.norm() < 1e-12) continue;
                if (ua.normalized().dot(ub.normalized()) > -0.8) continue;
                ps.dots.push_back(
                    flow_region_direction(p, as_lane, q).dot(flow_region_direction(p, as_gen, q)));
            }
            if (!ps.dots.empty()) pairs.push_back(std::move(ps));
        }
    }

    // Constraint edges come from corridor-parallel contacts only (|dot| near
    // 1); glancing contacts at junction mouths leave the windings free and
    // are checked for joint satisfiability after coloring.
    struct Edge {
        size_t a, b;
        int parity;  // 0 = same winding required, 1 = opposite required
    };
    std::vector<Edge> edges;
    for (const auto& ps : pairs) {
        bool want_same = false, want_opp = false;
        for (double d : ps.dots) {
            if (d >= 0.8) want_same = true;
            if (d <= -0.8) want_opp = true;
        }
        if (want_same && want_opp)
            throw EnvironmentInvalid(
                "no compatible direction assignment between flow regions " +
                std::to_string(p.flow[ps.a].id) + " and " + std::to_string(p.flow[ps.b].id));
        if (!want_same && !want_opp) continue;  // glancing contact, unconstrained
        edges.push_back({ps.a, ps.b, want_same ? 0 : 1});
    }

    // 2-color by BFS; unconstrained components default to counterclockwise
    std::vector<int> color(n, -1);
    for (size_t seed = 0; seed < n; ++seed) {
        if (color[seed] != -1) continue;
        color[seed] = 0;
        std::deque<size_t> queue{seed};
        while (!queue.empty()) {
            const size_t u = queue.front();
            queue.pop_front();
            for (const Edge& e : edges) {
                if (e.a != u && e.b != u) continue;
                const size_t v = (e.a == u) ? e.b : e.a;
                const int want = color[u] ^ e.parity;
                if (color[v] == -1) {
                    color[v] = want;
                    queue.push_back(v);
                } else if (color[v] != want) {
                    throw EnvironmentInvalid("flow direction constraints are not 2-colorable");
                }
            }
        }
    }
    for (size_t i = 0; i < n; ++i)
        p.flow[i].winding = (color[i] == 0) ? Winding::CounterClockwise : Winding::Clockwise;

    // final verification: corridor-parallel contacts must agree, and every
    // contact must leave a non-empty velocity cone for a straddling robot
    for (const auto& ps : pairs) {
        const int parity = (color[ps.a] == color[ps.b]) ? 1 : -1;
        for (double d : ps.dots) {
            const double realized = parity * d;
            if (std::abs(d) >= 0.8 && realized < -kDirectionDotSlack)
                throw EnvironmentInvalid("assigned flow directions oppose at a shared boundary");
            if (realized < -0.9)
                throw EnvironmentInvalid(
                    "assigned flow directions are jointly unsatisfiable at a contact");
        }
    }
}

Partition build_partition(const Environment& env) {
    PartitionBuild b = begin_partition(env);
    build_initial_flow_regions(b);
    build_single_lane_regions(b);
    build_inflated_flow_regions(b);
    place_passage_regions(b);
    smooth_open_perimeter(b);
    Partition p = finalize_partition(std::move(b));
    assign_flow_directions(p);
    return p;
}

RegionState classify(const Partition& p, const Disc& robot,
                     const std::optional<RegionState>& previous) {
    const double eps = p.tol.eps_geom;

    // 1. passage overlap takes precedence
    {
        const PassageRegion* hit = nullptr;
        double best = std::numeric_limits<double>::max();
        for (const auto& ps : p.passages) {
            const double d = distance(robot.center, ps.spot.center);
            if (d < robot.radius + ps.spot.radius - eps && d < best) {
                best = d;
                hit = &ps;
            }
        }
        if (hit) return RegionState::passage(hit->id);
    }

    struct Touch {
        RegionId id;
        double depth;  // signed clearance of the center
    };
    std::vector<Touch> touched;

    // 2. fully contained in one flow region
    for (const auto& f : p.flow) {
        const Containment c = disc_in_region(robot, f.geometry, eps);
        if (c == Containment::Contained) return RegionState::flow(f.id);
        if (c == Containment::Intersects)
            touched.push_back({f.id, signed_clearance(robot.center, f.geometry)});
    }
    // 3. fully contained in one open region
    for (const auto& o : p.open) {
        const Containment c = disc_in_region(robot, o.geometry, eps);
        if (c == Containment::Contained) return RegionState::open(o.id);
        if (c == Containment::Intersects)
            touched.push_back({o.id, signed_clearance(robot.center, o.geometry)});
    }

    // 4. transitioning
    auto has = [&](RegionId id) {
        return std::any_of(touched.begin(), touched.end(), [&](const Touch& t) { return t.id == id; });
    };
    auto best_other = [&](RegionId excluded) -> RegionId {
        RegionId best = -1;
        double depth = -std::numeric_limits<double>::max();
        for (const Touch& t : touched)
            if (t.id != excluded && (t.depth > depth || (t.depth == depth && t.id < best))) {
                best = t.id;
                depth = t.depth;
            }
        return best;
    };

    if (touched.empty()) {
        // numerically wedged between regions; fall back to the nearest one
        RegionId best = -1;
        double bd = std::numeric_limits<double>::max();
        for (const auto& f : p.flow) {
            const double d = region_distance(robot.center, f.geometry);
            if (d < bd) {
                bd = d;
                best = f.id;
            }
        }
        for (const auto& o : p.open) {
            const double d = region_distance(robot.center, o.geometry);
            if (d < bd) {
                bd = d;
                best = o.id;
            }
        }
        for (const auto& ps : p.passages) {
            const double d = distance(robot.center, ps.spot.center) - ps.spot.radius;
            if (d < bd) {
                bd = d;
                best = ps.id;
            }
        }
        if (best < 0) throw Error("classify: partition has no regions");
        if (p.passage_by_id(best)) return RegionState::passage(best);
        if (p.flow_by_id(best)) return RegionState::flow(best);
        return RegionState::open(best);
    }

    RegionId from = -1;
    if (previous) {
        if (previous->kind == RegionStateKind::Transitioning) {
            if (has(previous->a) && has(previous->b))
                return RegionState::transitioning(previous->a, previous->b);
            if (has(previous->a)) from = previous->a;
            else if (has(previous->b)) from = previous->b;
        } else if (has(previous->a)) {
            from = previous->a;
        }
    }
    if (from < 0) {
        // deepest touched region acts as the origin
        from = best_other(-1);
    }
    RegionId to = best_other(from);
    if (to < 0) {
        // only one region touched: the counterpart is the nearest passage or
        // region across the carved boundary
        double bd = std::numeric_limits<double>::max();
        for (const auto& ps : p.passages) {
            const double d = distance(robot.center, ps.spot.center) - ps.spot.radius;
            if (d < bd) {
                bd = d;
                to = ps.id;
            }
        }
        for (const auto& f : p.flow) {
            if (f.id == from) continue;
            const double d = region_distance(robot.center, f.geometry);
            if (d < bd) {
                bd = d;
                to = f.id;
            }
        }
        for (const auto& o : p.open) {
            if (o.id == from) continue;
            const double d = region_distance(robot.center, o.geometry);
            if (d < bd) {
                bd = d;
                to = o.id;
            }
        }
    }
    if (to < 0) {
        // single-region partition edge case
        if (p.flow_by_id(from)) return RegionState::flow(from);
        return RegionState::open(from);
    }
    return RegionState::transitioning(from, to);
}

DensityCap density_cap(const Partition& p, double packing_fraction) {
    if (packing_fraction <= 0.0 || packing_fraction > 1.0)
        throw Error("packing_fraction must be in (0, 1]");
    DensityCap dc;
    const double spot_area = M_PI * p.env.rho * p.env.rho;
    dc.packing_estimate =
        static_cast<long>(std::floor(packing_fraction * p.free_space.area() / spot_area));
    dc.region_count = p.region_count();
    dc.cap = dc.packing_estimate - dc.region_count;
    if (dc.cap < 0)
        throw EnvironmentInvalid("density cap is negative: M=" + std::to_string(dc.packing_estimate) +
                                 " N=" + std::to_string(dc.region_count));
    return dc;
}

PartitionCheckReport check_partition(const Partition& p) {
    PartitionCheckReport rep;
    const double rho = p.env.rho;

    // coverage
    PolyRegion psi;
    for (const auto& ps : p.passages)
        psi = region_boolean(psi, PolyRegion{{make_disc_polygon(ps.spot, p.tol.arc_tol)}},
                             BoolOp::Union);
    psi = region_boolean(psi, p.free_space, BoolOp::Intersect);
    double total = psi.area();
    for (const auto& f : p.flow) total += f.geometry.area();
    for (const auto& o : p.open) total += o.geometry.area();
    const double fa = p.free_space.area();
    rep.coverage_error_rel = std::abs(total - fa) / fa;
    if (rep.coverage_error_rel > p.tol.eps_area)
        rep.problems.push_back("coverage: regions do not sum to free space (rel err " +
                               std::to_string(rep.coverage_error_rel) + ")");

    // pairwise disjointness
    std::vector<const PolyRegion*> geoms;
    std::vector<PolyRegion> storage;
    for (const auto& f : p.flow) geoms.push_back(&f.geometry);
    for (const auto& o : p.open) geoms.push_back(&o.geometry);
    storage.push_back(psi);
    geoms.push_back(&storage.back());
    const double abs_eps_area = p.tol.eps_area * fa;
    for (size_t i = 0; i < geoms.size(); ++i)
        for (size_t j = i + 1; j < geoms.size(); ++j) {
            const double ov = region_boolean(*geoms[i], *geoms[j], BoolOp::Intersect).area();
            rep.max_pairwise_overlap = std::max(rep.max_pairwise_overlap, ov);
            if (ov > abs_eps_area)
                rep.problems.push_back("regions " + std::to_string(i) + "," + std::to_string(j) +
                                       " overlap by area " + std::to_string(ov));
        }

    // corridor clearance
    rep.min_corridor_clearance = std::numeric_limits<double>::max();
    for (const auto& s : corridor_clearance_samples(p.env, rho / 4))
        rep.min_corridor_clearance = std::min(rep.min_corridor_clearance, s.clearance);
    if (rep.min_corridor_clearance < 2 * rho - std::max(p.tol.eps_lane, rho * 1e-6))
        rep.problems.push_back("corridor clearance below one robot width: " +
                               std::to_string(rep.min_corridor_clearance));

    // direction compatibility at shared flow boundaries
    for (size_t i = 0; i < p.flow.size(); ++i) {
        for (size_t j = i + 1; j < p.flow.size(); ++j) {
            if (!p.adjacent(p.flow[i].id, p.flow[j].id)) continue;
            for (const Polygon& part : p.flow[i].extent.parts) {
                auto sample_ring = [&](const std::vector<Vec2>& ring) {
                    for (size_t k = 0; k < ring.size(); ++k) {
                        const Vec2 a = ring[k], bb = ring[(k + 1) % ring.size()];
                        const double seg = distance(a, bb);
                        const int steps = std::max(1, static_cast<int>(seg / (rho / 8)));
                        for (int s = 0; s < steps; ++s) {
                            const Vec2 q = a + (bb - a) * ((s + 0.5) / steps);
                            if (region_distance(q, p.flow[j].extent) > 200 * p.tol.eps_geom) continue;
                            const double d = flow_region_direction(p, p.flow[i], q)
                                                 .dot(flow_region_direction(p, p.flow[j], q));
                            rep.min_boundary_direction_dot =
                                std::min(rep.min_boundary_direction_dot, d);
                        }
                    }
                };
                sample_ring(part.exterior);
                for (const auto& h : part.holes) sample_ring(h);
            }
        }
    }
    if (rep.min_boundary_direction_dot < -kDirectionDotSlack)
        rep.problems.push_back("opposing flow directions at a shared boundary (dot " +
                               std::to_string(rep.min_boundary_direction_dot) + ")");

    // reachability: a disc flood fill equals the rule-respecting flood fill
    {
        const BoundingBox bb = bounding_box(p.free_space);
        const double step = rho / 4;
        const int nx = static_cast<int>(bb.width() / step) + 1;
        const int ny = static_cast<int>(bb.height() / step) + 1;
        auto cell_pos = [&](int ix, int iy) {
            return Vec2{bb.lo.x + ix * step, bb.lo.y + iy * step};
        };
        std::vector<char> fits(static_cast<size_t>(nx) * ny, 0);
        const double slack = 0.51 * step;
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix) {
                const Vec2 q = cell_pos(ix, iy);
                if (point_in_region(q, p.free_space) &&
                    boundary_distance(q, p.free_space) >= rho - slack)
                    fits[static_cast<size_t>(iy) * nx + ix] = 1;
            }
        auto flood = [&](bool directed) {
            std::vector<char> seen(fits.size(), 0);
            int seed = -1;
            for (size_t i = 0; i < fits.size() && seed < 0; ++i)
                if (fits[i]) seed = static_cast<int>(i);
            if (seed < 0) return seen;
            std::deque<int> queue{seed};
            seen[static_cast<size_t>(seed)] = 1;
            while (!queue.empty()) {
                const int cur = queue.front();
                queue.pop_front();
                const int cx = cur % nx, cy = cur / nx;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int qx = cx + dx, qy = cy + dy;
                        if (qx < 0 || qy < 0 || qx >= nx || qy >= ny) continue;
                        const int idx = qy * nx + qx;
                        if (!fits[static_cast<size_t>(idx)] || seen[static_cast<size_t>(idx)]) continue;
                        if (directed) {
                            const Vec2 from = cell_pos(cx, cy);
                            const Vec2 v = Vec2{static_cast<double>(dx), static_cast<double>(dy)}
                                               .normalized();
                            bool blocked = false;
                            for (const auto& f : p.flow) {
                                if (!point_in_region(from, f.extent)) continue;
                                if (v.dot(flow_region_direction(p, f, from)) < -0.35) {
                                    blocked = true;
                                    break;
                                }
                            }
                            if (blocked) continue;
                        }
                        seen[static_cast<size_t>(idx)] = 1;
                        queue.push_back(idx);
                    }
            }
            return seen;
        };
        const auto free_reach = flood(false);
        const auto ruled_reach = flood(true);
        rep.reachability_ok = (free_reach == ruled_reach);
        if (!rep.reachability_ok)
            rep.problems.push_back("rule-respecting reachability differs from free reachability");
    }

    return rep;
}

}  // namespace flowpact
