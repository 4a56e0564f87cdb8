#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowpact/geometry.hpp"

namespace flowpact {

using RegionId = int;
using GeneratorId = int;

/// Generator 0 is the environment perimeter; obstacle i is generator i+1.
inline constexpr GeneratorId kPerimeterGenerator = 0;

/// Geometric tolerances derived from the environment scale.
struct Tolerances {
    double eps_geom = 1e-9;   ///< tangency/containment tolerance (absolute)
    double eps_area = 1e-6;   ///< relative tolerance for area comparisons
    double arc_tol = 1e-3;    ///< max chordal deviation for arc discretization
    double eps_lane = 1e-6;   ///< gap tolerance for single-lane formation

    static Tolerances derive(double environment_diameter, double rho);
};

struct Environment {
    Polygon perimeter;               ///< outer boundary, no holes
    std::vector<Polygon> obstacles;  ///< pairwise disjoint, strictly inside
    double rho = 0.0;                ///< robot radius (m)
    double vmax = 0.0;               ///< speed cap (m/s)

    double diameter() const { return bounding_box(perimeter).diagonal(); }
};

/// Structural validation; throws EnvironmentInvalid or GeometryError.
void validate_environment(const Environment& env);

/// Free space: perimeter minus obstacles.
PolyRegion free_space_of(const Environment& env);

enum class Winding { Clockwise, CounterClockwise };
enum class FlowKind { Annular, SingleLane };

struct FlowRegion {
    RegionId id = -1;
    PolyRegion geometry;  ///< final geometry, passage discs carved out
    PolyRegion extent;    ///< pre-carve geometry (spot containment tests)
    std::vector<GeneratorId> generators;
    GeneratorId direction_generator = -1;  ///< winding reference; lanes inherit
    FlowKind kind = FlowKind::Annular;
    Winding winding = Winding::CounterClockwise;
    std::vector<Vec2> axis;  ///< single lanes: equidistant midline polyline
};

struct PassageRegion {
    RegionId id = -1;
    Disc spot;
    std::vector<RegionId> adjacent_flow_ids;
};

struct OpenRegion {
    RegionId id = -1;
    PolyRegion geometry;
};

struct DensityCap {
    long packing_estimate = 0;  ///< M
    long region_count = 0;      ///< N
    long cap = 0;               ///< M - N
};

enum class RegionStateKind { Passage, Flow, Open, Transitioning };

struct RegionState {
    RegionStateKind kind = RegionStateKind::Open;
    RegionId a = -1;  ///< the region, or the `from` endpoint when transitioning
    RegionId b = -1;  ///< the `to` endpoint when transitioning

    static RegionState passage(RegionId id) { return {RegionStateKind::Passage, id, -1}; }
    static RegionState flow(RegionId id) { return {RegionStateKind::Flow, id, -1}; }
    static RegionState open(RegionId id) { return {RegionStateKind::Open, id, -1}; }
    static RegionState transitioning(RegionId from, RegionId to) {
        return {RegionStateKind::Transitioning, from, to};
    }
    bool operator==(const RegionState&) const = default;
    bool in_single_region() const { return kind != RegionStateKind::Transitioning; }
};

std::string to_string(const RegionState& rs);

struct Partition {
    Environment env;
    Tolerances tol;
    PolyRegion free_space;
    std::vector<FlowRegion> flow;
    std::vector<OpenRegion> open;
    std::vector<PassageRegion> passages;
    /// Symmetric adjacency over all region ids; pairs stored with first < second.
    std::vector<std::pair<RegionId, RegionId>> adjacency;

    const FlowRegion* flow_by_id(RegionId id) const;
    const OpenRegion* open_by_id(RegionId id) const;
    const PassageRegion* passage_by_id(RegionId id) const;
    bool adjacent(RegionId a, RegionId b) const;
    /// Union of all flow extents (pre-carve); cached at finalize time.
    const PolyRegion& flow_space() const { return flow_space_; }
    int region_count() const {
        return static_cast<int>(flow.size() + open.size() + passages.size());
    }

    PolyRegion flow_space_;  // populated by finalize_partition
};

// --- pipeline (corresponding stages are exposed for targeted testing) ---

struct GeneratorRing {
    GeneratorId generator = -1;
    PolyRegion geometry;
};

struct LaneDraft {
    std::array<GeneratorId, 2> generators{-1, -1};
    PolyRegion geometry;
    std::vector<Vec2> midline;  ///< polyline along the equidistant curve
    bool closed = false;        ///< midline forms a loop (no ends)
};

struct PartitionBuild {
    Environment env;
    Tolerances tol;
    PolyRegion free_space;
    std::vector<GeneratorRing> rings;
    std::vector<LaneDraft> lanes;
    std::vector<Disc> passage_spots;
    bool smoothed = false;
};

/// Validates the environment and prepares shared state.
PartitionBuild begin_partition(const Environment& env);

/// One rho-band per flow generating object. Throws EnvironmentInvalid when a
/// corridor pinches below one robot width (2*rho) anywhere around a generator.
void build_initial_flow_regions(PartitionBuild& b);

/// Converts ring contact zones (generator gap within eps_lane of 2*rho) into
/// single-lane flow regions spanning the gap; the overlapped ring portions are
/// removed from their rings.
void build_single_lane_regions(PartitionBuild& b);

/// Splits overlaps of the 1.5*rho inflated rings along the equidistant curve
/// between the two generators and annexes each half onto its ring.
void build_inflated_flow_regions(PartitionBuild& b);

/// Places passage spots at both ends of every single-lane region and at every
/// point where three or more flow regions meet.
void place_passage_regions(PartitionBuild& b);

/// Morphological opening of the draft open space by a rho-disc; slivers a
/// rolling disc cannot rest in are absorbed into the adjacent flow regions.
void smooth_open_perimeter(PartitionBuild& b);

/// Ids, passage carving, open components, adjacency. Windings still unset.
Partition finalize_partition(PartitionBuild&& b);

/// Assigns cw/ccw per flow region by 2-coloring the compatibility constraint
/// graph; throws EnvironmentInvalid when no compatible assignment exists.
void assign_flow_directions(Partition& p);

/// Full pipeline.
Partition build_partition(const Environment& env);

// --- queries ---

/// Unit travel direction of the winding at p; p must lie in a flow region.
Vec2 flow_direction_at(const Partition& p, Vec2 pos);

/// Direction of the given flow region's winding evaluated at pos (pos need
/// not be inside the region; used for spot placement near boundaries).
Vec2 flow_region_direction(const Partition& p, const FlowRegion& region, Vec2 pos);

/// The paper's precedence: passage overlap, then flow containment, then open
/// containment, else transitioning (endpoints inferred from `previous`).
RegionState classify(const Partition& p, const Disc& robot,
                     const std::optional<RegionState>& previous);

/// M = floor(packing_fraction * area(F) / (pi rho^2)), N = region count.
DensityCap density_cap(const Partition& p, double packing_fraction);

// --- validation helpers shared by tests and the CLI ---

struct CorridorSample {
    Vec2 at;          ///< point on the generator boundary
    double clearance; ///< free corridor width measured across from `at`
};

/// Ray-cast corridor clearance sampled along every generator boundary.
std::vector<CorridorSample> corridor_clearance_samples(const Environment& env,
                                                       double spacing);

struct PartitionCheckReport {
    double coverage_error_rel = 0.0;  ///< |area(F) - sum(region areas)| / area(F)
    double max_pairwise_overlap = 0.0;
    double min_corridor_clearance = 0.0;
    double min_boundary_direction_dot = 1.0;
    bool reachability_ok = true;
    std::vector<std::string> problems;
    bool ok() const { return problems.empty(); }
};

/// Runs the partition invariants (coverage, disjointness, corridor width,
/// direction compatibility, rule-respecting reachability).
PartitionCheckReport check_partition(const Partition& p);

}  // namespace flowpact
