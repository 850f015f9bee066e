#include "priocomp/env.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace priocomp {

namespace {

std::vector<Rect> u_obstacle() {
    return {
        Rect{0.35, 0.35, 0.40, 0.70},  // left wall
        Rect{0.60, 0.35, 0.65, 0.70},  // right wall
        Rect{0.35, 0.65, 0.65, 0.70},  // top bar
    };
}

// Obstacle-task starts spawn within this distance of the obstacle set.
constexpr double kNearObstacleBand = 0.25;

}  // namespace

void EnvConfig::validate() const {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("env: gamma must be in (0,1)");
    if (horizon <= 0) throw std::invalid_argument("env: horizon must be positive");
    if (a_max <= 0.0) throw std::invalid_argument("env: a_max must be positive");
    if (goal_radius <= 0.0) throw std::invalid_argument("env: goal_radius must be positive");
    if (collision_margin < 0.0) throw std::invalid_argument("env: collision_margin must be >= 0");
    for (const Rect& r : obstacle_rects) {
        if (!(r.xmin < r.xmax && r.ymin < r.ymax))
            throw std::invalid_argument("env: degenerate obstacle rectangle");
        if (r.xmin < 0.0 || r.ymin < 0.0 || r.xmax > 1.0 || r.ymax > 1.0)
            throw std::invalid_argument("env: obstacle rectangle outside the unit square");
    }
    if (variant == EnvVariant::compound) {
        for (const Rect& r : obstacle_rects) {
            if (r.distance(goal_center) < goal_radius)
                throw std::invalid_argument("env: goal disk intersects an obstacle rectangle");
        }
    }
}

EnvConfig compound_task_config() {
    EnvConfig cfg;
    cfg.variant = EnvVariant::compound;
    cfg.obstacle_rects = u_obstacle();
    cfg.horizon = 200;
    return cfg;
}

EnvConfig obstacle_task_config() {
    EnvConfig cfg;
    cfg.variant = EnvVariant::obstacle;
    cfg.obstacle_rects = u_obstacle();
    cfg.horizon = 60;
    return cfg;
}

EnvConfig goal_task_config() {
    EnvConfig cfg;
    cfg.variant = EnvVariant::goal;
    cfg.obstacle_rects.clear();
    cfg.horizon = 100;
    return cfg;
}

double obstacle_distance(Vec2 s, const EnvConfig& cfg) {
    double d = std::numeric_limits<double>::infinity();
    for (const Rect& r : cfg.obstacle_rects) d = std::min(d, r.distance(s));
    return d;
}

double reward_obstacle(Vec2 s_next, const EnvConfig& cfg) {
    // Strict inequality: a point exactly on the margin boundary is safe.
    return obstacle_distance(s_next, cfg) < cfg.collision_margin ? -1.0 : 0.0;
}

double reward_goal(Vec2 s_next, const EnvConfig& cfg) {
    const double d = (s_next - cfg.goal_center).norm();
    return -d + (d < cfg.goal_radius ? 1.0 : 0.0);
}

namespace {

StepResult step_with_noise(Vec2 s, Vec2 a, Vec2 xi, const EnvConfig& cfg) {
    if (a.norm_inf() > cfg.a_max + 1e-12)
        throw std::invalid_argument("step: action exceeds |a|_inf <= a_max");
    StepResult res;
    res.next_state = clamp_unit_square(s + a + xi);
    res.r1 = reward_obstacle(res.next_state, cfg);
    res.r2 = reward_goal(res.next_state, cfg);
    res.collision = res.r1 < 0.0;
    res.done = cfg.variant != EnvVariant::obstacle &&
               (res.next_state - cfg.goal_center).norm() < cfg.goal_radius;
    return res;
}

}  // namespace

StepResult step(Vec2 s, Vec2 a, const EnvConfig& cfg) { return step_with_noise(s, a, {0, 0}, cfg); }

Vec2 sample_start(const EnvConfig& cfg, Rng& rng) {
    switch (cfg.variant) {
        case EnvVariant::compound:
            return cfg.start;
        case EnvVariant::goal:
            return {rng.uniform(), rng.uniform()};
        case EnvVariant::obstacle: {
            if (cfg.obstacle_rects.empty()) return {rng.uniform(), rng.uniform()};
            for (int tries = 0; tries < 100000; ++tries) {
                Vec2 s{rng.uniform(), rng.uniform()};
                const double d = obstacle_distance(s, cfg);
                if (d >= cfg.collision_margin && d <= kNearObstacleBand) return s;
            }
            throw std::runtime_error("sample_start: no valid start near the obstacle");
        }
    }
    throw std::logic_error("sample_start: unknown variant");
}

Trajectory rollout_from(const Policy& policy, const EnvConfig& cfg, Vec2 start,
                        std::uint64_t seed) {
    Rng rng(seed);
    Trajectory traj;
    traj.reserve(static_cast<std::size_t>(cfg.horizon));
    Vec2 s = start;
    for (int t = 0; t < cfg.horizon; ++t) {
        const Vec2 a = policy(s, rng);
        Vec2 xi{0, 0};
        if (cfg.noise_std > 0.0) xi = rng.normal2() * cfg.noise_std;
        const StepResult res = step_with_noise(s, a, xi, cfg);
        traj.push_back({s, a, res.r1, res.r2, res.next_state, res.collision, res.done});
        s = res.next_state;
        if (res.done) break;
    }
    return traj;
}

Trajectory rollout(const Policy& policy, const EnvConfig& cfg, std::uint64_t seed) {
    Rng start_rng(derive_seed(seed, 0x5741ULL));
    const Vec2 start = sample_start(cfg, start_rng);
    return rollout_from(policy, cfg, start, seed);
}

}  // namespace priocomp
