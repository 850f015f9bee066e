#pragma once

#include <cstdint>
#include <vector>

#include "priocomp/env.hpp"
#include "priocomp/rbf.hpp"
#include "priocomp/sampler.hpp"

namespace priocomp {

struct SoftQConfig {
    double alpha = 0.05;  // entropy temperature
    double gamma = 0.99;
    int n_value_samples = 32;
    std::size_t replay_capacity = 50000;
    int batch_size = 32;
    int episodes = 150;
    double lr = 0.01;

    // Training-loop knobs.
    double explore_uniform = 0.2;  // uniform share of the exploration mixture
    int svgd_updates_per_episode = 30;
    int svgd_batch_states = 16;
    int sampler_particles = 32;
    double sampler_lr = 2e-3;
    int final_polish_updates = 400;

    void validate() const;
};

struct Transition {
    Vec2 s;
    Vec2 a;
    double r = 0.0;
    Vec2 s_next;
    bool done = false;
};

/// Fixed-capacity ring buffer with uniform sampling.
class ReplayBuffer {
  public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(const Transition& t);
    std::size_t size() const { return data_.size(); }
    const Transition& sample(Rng& rng) const;
    const Transition& at(std::size_t i) const { return data_[i]; }

  private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> data_;
};

/// Soft state value V(s) = alpha log int exp(Q(s,a)/alpha) da, estimated by
/// importance sampling with a uniform proposal over the action box and a
/// shifted log-sum-exp. Exact for constant Q at any n.
double soft_value(const QFunction& q, Vec2 s, double alpha, int n, double a_max, Rng& rng);

/// Soft Bellman backup target: r + gamma * v_next, or r at terminals.
double bellman_target(double r, bool done, double v_next, double gamma);

struct EpisodeMetrics {
    int episode = 0;
    double return_r1 = 0.0;
    double return_r2 = 0.0;
    int collisions = 0;
    double td_loss = 0.0;
};

struct TaskTrainResult {
    RbfQNet q;
    SamplerNet sampler;
    std::vector<EpisodeMetrics> metrics;
};

/// Thrown by the divergence guard when mean |Q| over a batch exceeds 1e4.
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Soft Q-learning for a single task (obstacle trains on r1, goal on r2):
/// rollout with the current amortized sampler mixed with uniform
/// exploration, store transitions, and per step regress Q onto soft Bellman
/// targets; the sampler tracks Q through SVGD updates between episodes.
/// Deterministic given the seed.
TaskTrainResult train_task(const EnvConfig& env_cfg, const SoftQConfig& cfg,
                           std::uint64_t seed);

}  // namespace priocomp
