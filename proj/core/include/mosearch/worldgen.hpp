#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "mosearch/semantic_grid.hpp"

namespace mosearch {

struct GenConfig {
    int rooms = 0;  // 0 = sample uniformly in [min_rooms, max_rooms]
    int min_rooms = 4;
    int max_rooms = 10;
    double room_min_side = 2.0;   // meters
    double room_max_side = 6.0;   // meters
    double corridor_width = 1.0;  // meters
    double door_width = 0.8;      // meters
    double resolution = kGridResolution;
    int max_attempts = 20;

    bool operator==(const GenConfig&) const = default;
};

struct EpisodeSpec {
    uint64_t seed = 0;
    int k = 0;
    SemanticGrid grid;  // objects rendered into the semantic layer
    std::vector<uint8_t> goal_vector;  // length num_classes, 1 for each spawned class
    Pose start_pose;
    int step_cap = 3500;
    int collision_cap = 600;

    const std::vector<ObjectPlacement>& objects() const { return grid.objects(); }
    bool operator==(const EpisodeSpec&) const = default;
};

/// BSP room split plus corridor carving. Deterministic in (seed, config).
/// Throws GenerationFailure when constraints cannot be met within
/// config.max_attempts.
SemanticGrid generate_floorplan(uint64_t seed, const GenConfig& config = {});

/// Picks k object placements with distinct classes, >= 0.5 m wall clearance
/// and >= 1.0 m pairwise separation, all inside the main free component.
/// Does not render into the grid. Throws InfeasibleSpawn.
std::vector<ObjectPlacement> spawn_objects(const SemanticGrid& grid, int k, uint64_t seed);

/// Full solvable episode: floorplan + objects + reachable start pose.
EpisodeSpec make_episode(uint64_t seed, int k, const GenConfig& config = {});

/// Episode on an existing floorplan (scene reuse across evaluation episodes).
EpisodeSpec make_episode_on(const SemanticGrid& scene, uint64_t episode_seed, int k);

/// Versioned JSON with run-length-encoded occupancy. Round-trips bit-exactly.
void save_floorplan(const SemanticGrid& grid, const std::filesystem::path& path);

/// Throws MalformedFile on parse/shape problems, VersionMismatch on a
/// version field other than the supported one. Never partially loads.
SemanticGrid load_floorplan(const std::filesystem::path& path);

inline constexpr int kFloorplanFormatVersion = 1;

// Start poses keep this much clearance so the robot disc (0.18 m) never
// spawns against a wall cell edge.
inline constexpr double kStartClearance = 0.25;

}  // namespace mosearch
