#pragma once

#include <array>
#include <optional>
#include <vector>

#include "mosearch/planner.hpp"
#include "mosearch/semantic_grid.hpp"
#include "mosearch/worldgen.hpp"

namespace mosearch {

struct SimConfig {
    double dt = 0.1;            // 10 Hz control
    double v_max = 0.5;         // m/s
    double w_max = 1.5;         // rad/s
    double robot_radius = 0.18; // meters
    int n_rays = 128;
    double fov = 79.0 * kPi / 180.0;
    double max_depth = 5.6;     // meters
    double found_radius = kFoundRadius;
    double sparse_reward = 10.0;
    double time_penalty = -0.0025;
    double collision_penalty = -0.1;
    double distance_scale = 0.1;  // kappa for the geodesic progress term
    double action_scale = 1.0;    // real-world deployments scale commands down (0.55)
    double inflation_radius = kInflationRadius;

    bool operator==(const SimConfig&) const = default;
};

inline constexpr int kCollisionWindow = 16;

struct RobotState {
    Pose pose;
    double radius = 0.18;
    Vec2 last_action;  // executed (v, w)
    int d1 = 0;        // collision flag this step
    std::array<uint8_t, kCollisionWindow> collision_window{};
    int window_pos = 0;
    int steps_elapsed = 0;
    int collisions_total = 0;

    int d2() const {
        int s = 0;
        for (uint8_t c : collision_window) s += c;
        return s;
    }
};

struct RayHit {
    double bearing = 0.0;   // radians relative to heading
    double distance = 0.0;  // meters in (0, max_depth]
    int class_id = kNoClass;
    int instance_id = kNoInstance;
    bool hit_wall = false;
};

struct SensorFrame {
    std::vector<RayHit> rays;
};

struct RewardTerms {
    double sparse = 0.0;
    double time = 0.0;
    double distance = 0.0;
    double collision = 0.0;
    double total() const { return sparse + time + distance + collision; }
};

enum class Status : uint8_t { Running = 0, Success = 1, CollisionCap = 2, Timeout = 3 };

const char* to_string(Status s);

struct StepResult {
    double reward = 0.0;
    RewardTerms reward_terms;
    std::vector<int> newly_found;
    Status status = Status::Running;
};

/// Unicycle integration with wall sliding. Pure; exposed for tests.
/// Returns the post-step state given a clamped (v, w) command.
RobotState integrate_motion(const RobotState& state, Vec2 command, const SemanticGrid& grid,
                            const SimConfig& config);

/// 128-ray depth/semantic scan via supercover grid traversal. First wall or
/// object cell within max_depth is the hit; otherwise distance = max_depth.
SensorFrame sense(const SemanticGrid& grid, Pose pose, const SimConfig& config);

/// True when the robot disc at `p` overlaps any wall cell.
bool disc_collides(const SemanticGrid& grid, Vec2 p, double radius);

/// Instances that are seen, not yet found, and within found_radius of the
/// robot center (Euclidean).
std::vector<int> adjudicate_found(const RobotState& state, const std::vector<int>& seen,
                                  const std::vector<int>& already_found,
                                  const std::vector<ObjectPlacement>& objects,
                                  double found_radius = kFoundRadius);

RewardTerms compute_reward(double prev_geodesic_d, double new_geodesic_d, int newly_found_count,
                           int d1, const SimConfig& config);

/// Steps one episode: differential-drive motion, sensing, found/termination
/// adjudication and reward assembly. Owns the episode's SearchOracle.
class Simulator {
public:
    Simulator(const EpisodeSpec& episode, SimConfig config = {});

    const EpisodeSpec& episode() const { return *episode_; }
    const SimConfig& config() const { return config_; }
    const RobotState& robot() const { return state_; }
    const SearchOracle& oracle() const { return oracle_; }
    Status status() const { return status_; }
    const SensorFrame& last_frame() const { return frame_; }

    const std::vector<int>& found() const { return found_; }
    std::vector<int> unfound() const;
    bool is_seen(int instance_id) const;

    /// Command in physical units; clamped to [-v_max, v_max] x [-w_max, w_max]
    /// and scaled by action_scale. Must not be called after termination.
    StepResult step(Vec2 command);

    /// Convenience for policies acting in normalized [-1, 1]^2.
    Vec2 to_command(Vec2 normalized) const {
        return {normalized.x * config_.v_max, normalized.y * config_.w_max};
    }

private:
    void update_seen();

    const EpisodeSpec* episode_;
    SimConfig config_;
    SearchOracle oracle_;
    RobotState state_;
    SensorFrame frame_;
    Status status_ = Status::Running;
    std::vector<int> seen_;
    std::vector<int> found_;
    // geodesic progress anchor: the currently closest unfound instance
    int distance_target_ = kNoInstance;
    double distance_anchor_ = 0.0;
};

}  // namespace mosearch
