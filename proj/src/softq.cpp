#include "priocomp/softq.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace priocomp {

void SoftQConfig::validate() const {
    if (alpha <= 0.0) throw std::invalid_argument("softq: alpha must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("softq: gamma must be in (0,1)");
    if (n_value_samples < 16) throw std::invalid_argument("softq: n_value_samples must be >= 16");
    if (batch_size < 1) throw std::invalid_argument("softq: batch_size must be >= 1");
    if (episodes < 0) throw std::invalid_argument("softq: episodes must be >= 0");
    if (lr <= 0.0) throw std::invalid_argument("softq: lr must be positive");
    if (replay_capacity < 1) throw std::invalid_argument("softq: replay_capacity must be >= 1");
    if (explore_uniform < 0.0 || explore_uniform > 1.0)
        throw std::invalid_argument("softq: explore_uniform must be in [0,1]");
}

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    data_.reserve(capacity_);
}

void ReplayBuffer::push(const Transition& t) {
    if (data_.size() < capacity_) {
        data_.push_back(t);
    } else {
        data_[next_] = t;
        next_ = (next_ + 1) % capacity_;
    }
}

const Transition& ReplayBuffer::sample(Rng& rng) const {
    if (data_.empty()) throw std::logic_error("ReplayBuffer: sampling from empty buffer");
    return data_[rng.integer(data_.size())];
}

double soft_value(const QFunction& q, Vec2 s, double alpha, int n, double a_max, Rng& rng) {
    if (n < 1) throw std::invalid_argument("soft_value: n must be >= 1");
    if (alpha <= 0.0) throw std::invalid_argument("soft_value: alpha must be positive");
    const auto eval = q.action_evaluator(s);
    std::vector<double> scaled(n);
    double m = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const Vec2 a{rng.uniform(-a_max, a_max), rng.uniform(-a_max, a_max)};
        scaled[i] = eval(a) / alpha;
        m = std::max(m, scaled[i]);
    }
    double sum = 0.0;
    for (double v : scaled) sum += std::exp(v - m);
    const double log_vol = std::log(2.0 * a_max) * 2.0;
    return alpha * (m + std::log(sum / n) + log_vol);
}

double bellman_target(double r, bool done, double v_next, double gamma) {
    return done ? r : r + gamma * v_next;
}

namespace {

constexpr double kDivergenceBound = 1e4;

Vec2 uniform_action(double a_max, Rng& rng) {
    return {rng.uniform(-a_max, a_max), rng.uniform(-a_max, a_max)};
}

}  // namespace

TaskTrainResult train_task(const EnvConfig& env_cfg, const SoftQConfig& cfg, std::uint64_t seed) {
    env_cfg.validate();
    cfg.validate();
    if (env_cfg.variant == EnvVariant::compound)
        throw std::invalid_argument("train_task: expects a single-task variant");
    const bool obstacle_task = env_cfg.variant == EnvVariant::obstacle;

    Rng rng(seed);
    TaskTrainResult result{RbfQNet::default_grid(env_cfg.a_max),
                           SamplerNet::init(env_cfg.a_max, 64, derive_seed(seed, 0x5a)),
                           {}};
    ReplayBuffer replay(cfg.replay_capacity);
    SvgdConfig svgd;
    svgd.n_particles = cfg.sampler_particles;
    svgd.alpha = cfg.alpha;
    svgd.lr = cfg.sampler_lr;

    const std::size_t min_fill = static_cast<std::size_t>(cfg.batch_size) * 4;
    std::vector<TdSample> batch(cfg.batch_size);
    std::vector<Vec2> svgd_states(cfg.svgd_batch_states);

    for (int ep = 0; ep < cfg.episodes; ++ep) {
        EpisodeMetrics m;
        m.episode = ep;
        int updates = 0;
        Vec2 s = sample_start(env_cfg, rng);
        for (int t = 0; t < env_cfg.horizon; ++t) {
            const Vec2 a = rng.uniform() < cfg.explore_uniform
                               ? uniform_action(env_cfg.a_max, rng)
                               : result.sampler.sample(s, rng);
            const StepResult res = step(s, a, env_cfg);
            const double r = obstacle_task ? res.r1 : res.r2;
            replay.push({s, a, r, res.next_state, res.done});
            m.return_r1 += res.r1;
            m.return_r2 += res.r2;
            m.collisions += res.collision ? 1 : 0;

            if (replay.size() >= min_fill) {
                for (int b = 0; b < cfg.batch_size; ++b) {
                    const Transition& tr = replay.sample(rng);
                    const double v_next = soft_value(result.q, tr.s_next, cfg.alpha,
                                                     cfg.n_value_samples, env_cfg.a_max, rng);
                    batch[b] = {tr.s, tr.a, bellman_target(tr.r, tr.done, v_next, cfg.gamma)};
                }
                const TdStepStats st = result.q.td_step(batch, cfg.lr);
                if (st.mean_abs_q > kDivergenceBound)
                    throw DivergenceError("train_task: mean |Q| exceeded " +
                                          std::to_string(kDivergenceBound));
                m.td_loss += st.mse;
                ++updates;
            }
            s = res.next_state;
            if (res.done) break;
        }
        if (updates > 0) m.td_loss /= updates;

        if (replay.size() >= min_fill) {
            for (int k = 0; k < cfg.svgd_updates_per_episode; ++k) {
                for (int i = 0; i < cfg.svgd_batch_states; ++i)
                    svgd_states[i] = replay.sample(rng).s;
                svgd_update(result.sampler, result.q, svgd_states, svgd, rng);
            }
        }
        result.metrics.push_back(m);
    }

    if (cfg.episodes > 0 && replay.size() >= min_fill) {
        for (int k = 0; k < cfg.final_polish_updates; ++k) {
            for (int i = 0; i < cfg.svgd_batch_states; ++i) svgd_states[i] = replay.sample(rng).s;
            svgd_update(result.sampler, result.q, svgd_states, svgd, rng);
        }
    }
    return result;
}

}  // namespace priocomp
