#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "priocomp/env.hpp"
#include "priocomp/indifference.hpp"
#include "priocomp/sampler.hpp"
#include "priocomp/softq.hpp"

namespace priocomp {

struct OnlineConfig {
    int episodes = 150;
    int batch_size = 32;
    double lr = 0.01;
    bool init_from_q2 = true;  // warm-start the live low-priority net from Q2*
    double constraint_epsilon = 0.5;
    int eval_every = 10;

    // Loop knobs shared with single-task training.
    double alpha = 0.05;
    double gamma = 0.99;
    int n_value_samples = 32;
    std::size_t replay_capacity = 50000;
    int eval_rollouts = 50;
    int svgd_updates_per_episode = 50;
    int svgd_batch_states = 16;
    int sampler_particles = 32;
    double sampler_lr = 2e-3;
    int sampler_warmup_updates = 1000;

    void validate() const;
};

/// Paired evaluation of the compound policy against the reference
/// high-priority policy on identical start states and rollout seeds.
struct ConstraintReport {
    int episode = 0;
    double return_r1_compound = 0.0;
    double return_r1_reference = 0.0;
    double gap = 0.0;  // reference - compound
    int collisions = 0;
    double goal_reach_rate = 0.0;
    std::vector<Vec2> start_states;  // retained so pairing is checkable
};

/// Exploration is sampling from the compound policy itself; the indifference
/// weight already gates low-priority influence, no extra noise is injected.
Vec2 explore_step(const CompoundQ& cq, const SamplerNet& sampler, Vec2 s, Rng& rng);

ConstraintReport constraint_monitor(const CompoundQ& cq, const SamplerNet& compound_sampler,
                                    const SamplerNet& pi1_sampler, const EnvConfig& env_cfg,
                                    int n_rollouts, std::uint64_t seed, int episode = 0);

struct OnlineResult {
    CompoundQ cq;  // holds the retrained low-priority net
    SamplerNet sampler;
    std::vector<ConstraintReport> reports;
    long total_train_collisions = 0;
};

/// Indifference-space exploration: keep q1 frozen inside the compound
/// Q-function and retrain the low-priority net on its own reward stream,
/// acting through the compound-policy sampler. Bellman bootstrap values for
/// the low-priority net come from actions drawn from that same sampler, so
/// the retrained net values the future under the constrained behavior
/// policy. Emits a ConstraintReport every eval_every episodes and after the
/// final one.
OnlineResult train_online(const RbfQNet& q1, const RbfQNet& q2_init, const EnvConfig& env_cfg,
                          const WeightParams& params, const OnlineConfig& cfg,
                          const SamplerNet& pi1_sampler, std::uint64_t seed,
                          const SamplerNet* initial_sampler = nullptr);

/// States probed by calibration and the adversarial certificate: a ring of
/// wall-adjacent states around the obstacle set plus free-space states.
std::vector<Vec2> default_probe_states(const EnvConfig& cfg);

}  // namespace priocomp
