#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "mosearch/angle_bins.hpp"
#include "mosearch/grid.hpp"
#include "mosearch/semantic_grid.hpp"
#include "mosearch/worldgen.hpp"

namespace mosearch {

inline constexpr double kInflationRadius = 0.2;   // meters, training default
inline constexpr double kWaypointArcMin = 0.4;    // meters along the path
inline constexpr double kWaypointArcMax = 0.55;
inline constexpr double kFoundRadius = 1.3;       // meters, success vicinity

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Obstacle grid dilated by a Euclidean radius. A cell is blocked when any
/// base wall cell center lies within `radius` of its center.
class InflatedGrid {
public:
    InflatedGrid() = default;
    InflatedGrid(const Grid<uint8_t>& base_blocked, double resolution, double radius);

    bool blocked(Cell c) const { return !blocked_.in_bounds(c) || blocked_.at(c) != 0; }
    const Grid<uint8_t>& blocked_grid() const { return blocked_; }
    double resolution() const { return resolution_; }
    double radius() const { return radius_; }
    int width() const { return blocked_.width(); }
    int height() const { return blocked_.height(); }

private:
    Grid<uint8_t> blocked_;
    double resolution_ = kGridResolution;
    double radius_ = 0.0;
};

InflatedGrid inflate(const SemanticGrid& grid, double radius);

struct Path {
    std::vector<Cell> cells;  // start .. goal, 8-connected
    double cost = 0.0;        // meters, straight = res, diagonal = sqrt(2) * res
    double resolution = kGridResolution;
};

/// Cost-optimal 8-connected A* with octile heuristic. Returns nullopt when
/// the goal is unreachable (or blocked).
std::optional<Path> astar(const Grid<uint8_t>& blocked, double resolution, Cell start, Cell goal);

inline std::optional<Path> astar(const InflatedGrid& g, Cell start, Cell goal) {
    return astar(g.blocked_grid(), g.resolution(), start, goal);
}

/// Octile distance in meters; admissible for the 8-connected step costs.
double octile_distance(Cell a, Cell b, double resolution);

/// Dijkstra geodesic distances from a source cell. Cheap O(1) lookups and
/// shortest-path extraction for the per-step training loop.
class DistanceField {
public:
    static DistanceField compute(const Grid<uint8_t>& blocked, double resolution, Cell source);

    double at(Cell c) const;
    bool reachable(Cell c) const { return at(c) < kInf; }
    Cell source() const { return source_; }
    double resolution() const { return resolution_; }

    /// Shortest path from `from` to the source by steepest descent on the
    /// field. Cost-identical to astar. Returns nullopt if unreachable.
    std::optional<Path> path_from(Cell from) const;

private:
    // Geodesic costs are kept as (straight, diagonal) step counts; the metric
    // value is derived with one fixed expression so planners agree bit-exactly.
    struct StepPair {
        int32_t straight = -1;  // -1 = unreached
        int32_t diagonal = -1;
        bool operator==(const StepPair&) const = default;
    };
    Grid<StepPair> steps_;
    Cell source_{};
    double resolution_ = kGridResolution;
};

/// Picks the first path vertex whose arc distance from the path start lies in
/// [0.4, 0.55] m (the last vertex when the path is shorter) and returns the
/// angle to it in the robot frame, binned.
AngleLabel waypoint_and_angle(const Path& path, Pose pose);

/// Per-episode shortest-path machinery: the inflated grid plus one distance
/// field per object, sourced at the object's center cell.
class SearchOracle {
public:
    explicit SearchOracle(const EpisodeSpec& episode, double inflation_radius = kInflationRadius);

    const InflatedGrid& inflated() const { return inflated_; }
    const EpisodeSpec& episode() const { return *episode_; }

    /// Geodesic meters from pose to the object, kInf if unreachable.
    double geodesic_to(int instance_id, Pose pose) const;

    /// Unfound instance with minimal geodesic cost; ties break toward the
    /// lower instance id. Throws NoReachableTarget.
    std::pair<int, double> closest_target(Pose pose, const std::vector<int>& unfound) const;

    /// Groundtruth direction label: angle to the A*-path waypoint toward the
    /// closest unfound target.
    AngleLabel direction_label(Pose pose, const std::vector<int>& unfound) const;

    /// Shortest path from the pose to the given object.
    std::optional<Path> path_to(int instance_id, Pose pose) const;

    /// Robot cell snapped to the nearest inflation-free cell (the robot can
    /// hug walls closer than the inflation radius).
    Cell plan_cell(Pose pose) const;

private:
    const EpisodeSpec* episode_;
    InflatedGrid inflated_;
    std::vector<DistanceField> fields_;  // by instance id
};

/// Length of the greedy tour: repeatedly walk the shortest path to the
/// geodesically nearest unfound object, stopping each leg at the first
/// vertex within the 1.3 m found radius.
double greedy_reference_length(const EpisodeSpec& episode, double inflation_radius = kInflationRadius);
double greedy_reference_length(const SearchOracle& oracle);

/// Optimal-order tour lower bound (exact Held-Karp over legs truncated by a
/// per-object geodesic tail bound). Analysis aid; k <= 6 only.
double held_karp_reference_length(const EpisodeSpec& episode, double inflation_radius = kInflationRadius);

}  // namespace mosearch
