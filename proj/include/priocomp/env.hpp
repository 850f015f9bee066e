#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "priocomp/geometry.hpp"
#include "priocomp/rng.hpp"

namespace priocomp {

enum class EnvVariant { obstacle, goal, compound };

/// Continuous 2D navigation MDP. Dynamics are s' = clip(s + a) on the unit
/// square; stochastic transition noise is available through noise_std and
/// defaults to zero.
struct EnvConfig {
    EnvVariant variant = EnvVariant::compound;
    std::vector<Rect> obstacle_rects;
    Vec2 goal_center{0.5, 0.85};
    double goal_radius = 0.05;
    double collision_margin = 0.02;
    int horizon = 200;
    double gamma = 0.99;
    double a_max = 0.05;
    Vec2 start{0.5, 0.15};
    double noise_std = 0.0;

    /// Throws std::invalid_argument when an invariant is broken.
    void validate() const;
};

/// U-shaped obstacle opening downward, goal behind the bar. The greedy path
/// from start enters the mouth and stalls there.
EnvConfig compound_task_config();
/// Obstacle-avoidance task: U rectangles only, starts spawn near the
/// obstacle, no goal termination.
EnvConfig obstacle_task_config();
/// Goal-reaching task: no obstacle, starts spawn uniformly.
EnvConfig goal_task_config();

struct StepResult {
    Vec2 next_state;
    double r1 = 0.0;
    double r2 = 0.0;
    bool collision = false;
    bool done = false;
};

/// Distance from s to the union of obstacle rectangles (+inf when none).
double obstacle_distance(Vec2 s, const EnvConfig& cfg);

/// -1 when strictly inside the collision margin of the obstacle set, else 0.
double reward_obstacle(Vec2 s_next, const EnvConfig& cfg);

/// Dense shaping -|s' - goal| plus +1 inside the goal disk.
double reward_goal(Vec2 s_next, const EnvConfig& cfg);

/// One deterministic transition. Throws std::invalid_argument when the
/// action violates the bound |a|_inf <= a_max.
StepResult step(Vec2 s, Vec2 a, const EnvConfig& cfg);

struct TrajStep {
    Vec2 state;
    Vec2 action;
    double r1 = 0.0;
    double r2 = 0.0;
    Vec2 next_state;
    bool collision = false;
    bool done = false;
};

using Trajectory = std::vector<TrajStep>;

/// Action sampler: state and rollout stream in, action out.
using Policy = std::function<Vec2(Vec2, Rng&)>;

/// Start state for the variant: fixed (compound), uniform (goal), uniform in
/// a band around the obstacle set (obstacle).
Vec2 sample_start(const EnvConfig& cfg, Rng& rng);

/// Seeded episode; terminates at done or horizon.
Trajectory rollout(const Policy& policy, const EnvConfig& cfg, std::uint64_t seed);

/// Same, from an explicit start state (paired evaluations).
Trajectory rollout_from(const Policy& policy, const EnvConfig& cfg, Vec2 start,
                        std::uint64_t seed);

}  // namespace priocomp
