#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "priocomp/env.hpp"
#include "priocomp/indifference.hpp"
#include "priocomp/sampler.hpp"

namespace priocomp {

struct FieldPoint {
    Vec2 state;
    Vec2 mean_action;
    double weight_at_mode = 1.0;
};

/// Mean sampler action on a grid_n x grid_n state grid; for compound
/// checkpoints also the indifference weight at the policy's mode action
/// (grid argmax of the compound Q). Plain Q-nets report weight 1.
std::vector<FieldPoint> policy_field(const SamplerNet& sampler, const CompoundQ* cq,
                                     const EnvConfig& env_cfg, int grid_n, std::uint64_t seed);

/// vector_field.csv: x,y,mean_action_dx,mean_action_dy,weight_at_mode.
void write_vector_field_csv(const std::filesystem::path& path,
                            std::span<const FieldPoint> field);

/// trajectories.csv: traj,step,x,y,dx,dy,r1,r2,next_x,next_y,collision,done.
void write_trajectories_csv(const std::filesystem::path& path,
                            std::span<const Trajectory> trajectories);

/// Static scene: workspace square, obstacle rectangles, goal disk, action
/// arrows, trajectory polylines.
void write_scene_svg(const std::filesystem::path& path, const EnvConfig& env_cfg,
                     std::span<const FieldPoint> field,
                     std::span<const Trajectory> trajectories);

}  // namespace priocomp
