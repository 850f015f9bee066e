#include "priocomp/online.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace priocomp {

void OnlineConfig::validate() const {
    if (episodes < 0) throw std::invalid_argument("online: episodes must be >= 0");
    if (batch_size < 1) throw std::invalid_argument("online: batch_size must be >= 1");
    if (lr <= 0.0) throw std::invalid_argument("online: lr must be positive");
    if (constraint_epsilon < 0.0)
        throw std::invalid_argument("online: constraint_epsilon must be >= 0");
    if (eval_every < 1) throw std::invalid_argument("online: eval_every must be >= 1");
    if (alpha <= 0.0) throw std::invalid_argument("online: alpha must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("online: gamma must be in (0,1)");
    if (n_value_samples < 1) throw std::invalid_argument("online: n_value_samples must be >= 1");
    if (eval_rollouts < 1) throw std::invalid_argument("online: eval_rollouts must be >= 1");
}

Vec2 explore_step(const CompoundQ& /*cq*/, const SamplerNet& sampler, Vec2 s, Rng& rng) {
    return sampler.sample(s, rng);
}

ConstraintReport constraint_monitor(const CompoundQ& cq, const SamplerNet& compound_sampler,
                                    const SamplerNet& pi1_sampler, const EnvConfig& env_cfg,
                                    int n_rollouts, std::uint64_t seed, int episode) {
    (void)cq;  // the compound policy is realized by its amortized sampler
    if (n_rollouts < 1) throw std::invalid_argument("constraint_monitor: n_rollouts must be >= 1");
    ConstraintReport rep;
    rep.episode = episode;

    Rng start_rng(derive_seed(seed, 0x57a7));
    rep.start_states.reserve(n_rollouts);
    for (int k = 0; k < n_rollouts; ++k) rep.start_states.push_back(sample_start(env_cfg, start_rng));

    const Policy compound_policy = policy_from_sampler(compound_sampler);
    const Policy reference_policy = policy_from_sampler(pi1_sampler);
    int reached = 0;
    for (int k = 0; k < n_rollouts; ++k) {
        const std::uint64_t roll_seed = derive_seed(seed, 100 + k);
        const Trajectory comp = rollout_from(compound_policy, env_cfg, rep.start_states[k], roll_seed);
        const Trajectory ref = rollout_from(reference_policy, env_cfg, rep.start_states[k], roll_seed);
        double r1c = 0.0, r1r = 0.0;
        bool goal = false;
        for (const TrajStep& st : comp) {
            r1c += st.r1;
            rep.collisions += st.collision ? 1 : 0;
            goal = goal || st.done;
        }
        for (const TrajStep& st : ref) r1r += st.r1;
        rep.return_r1_compound += r1c / n_rollouts;
        rep.return_r1_reference += r1r / n_rollouts;
        if (goal) ++reached;
    }
    rep.gap = rep.return_r1_reference - rep.return_r1_compound;
    rep.goal_reach_rate = static_cast<double>(reached) / n_rollouts;
    return rep;
}

namespace {

constexpr double kDivergenceBound = 1e4;

/// Soft value of q over actions drawn from the behavior sampler
/// (log-average-exp; no proposal correction, the point is to value the
/// future under the constrained behavior policy).
double soft_value_under_sampler(const RbfQNet& q, const SamplerNet& sampler, Vec2 s, double alpha,
                                int n, Rng& rng) {
    const auto slice = q.at_state(s);
    double m = -std::numeric_limits<double>::infinity();
    std::vector<double> scaled(n);
    for (int i = 0; i < n; ++i) {
        scaled[i] = slice.value(sampler.sample(s, rng)) / alpha;
        m = std::max(m, scaled[i]);
    }
    double sum = 0.0;
    for (double v : scaled) sum += std::exp(v - m);
    return alpha * (m + std::log(sum / n));
}

}  // namespace

OnlineResult train_online(const RbfQNet& q1, const RbfQNet& q2_init, const EnvConfig& env_cfg,
                          const WeightParams& params, const OnlineConfig& cfg,
                          const SamplerNet& pi1_sampler, std::uint64_t seed,
                          const SamplerNet* initial_sampler) {
    env_cfg.validate();
    cfg.validate();
    params.validate();

    RbfQNet q2 = cfg.init_from_q2
                     ? q2_init
                     : RbfQNet(q2_init.centers(), std::vector<double>(q2_init.size(), 0.0),
                               q2_init.bandwidth());
    OnlineResult result{CompoundQ(q1, std::move(q2), params),
                        initial_sampler != nullptr
                            ? *initial_sampler
                            : SamplerNet::init(env_cfg.a_max, 64, derive_seed(seed, 0xb0)),
                        {},
                        0};
    CompoundQ& cq = result.cq;
    SamplerNet& sampler = result.sampler;

    Rng rng(derive_seed(seed, 0x0e));
    SvgdConfig svgd;
    svgd.n_particles = cfg.sampler_particles;
    svgd.alpha = cfg.alpha;
    svgd.lr = cfg.sampler_lr;

    if (initial_sampler == nullptr && cfg.sampler_warmup_updates > 0) {
        // Fresh sampler: warm it up against the zero-shot compound Q on
        // states along the nominal start region before acting.
        std::vector<Vec2> warm_states;
        for (int i = 0; i < 16; ++i)
            warm_states.push_back(sample_start(env_cfg, rng));
        for (int k = 0; k < cfg.sampler_warmup_updates; ++k)
            svgd_update(sampler, cq, warm_states, svgd, rng);
    }

    ReplayBuffer replay(cfg.replay_capacity);
    const std::size_t min_fill = static_cast<std::size_t>(cfg.batch_size) * 4;
    std::vector<TdSample> batch(cfg.batch_size);
    std::vector<Vec2> svgd_states(cfg.svgd_batch_states);

    for (int ep = 1; ep <= cfg.episodes; ++ep) {
        Vec2 s = sample_start(env_cfg, rng);
        for (int t = 0; t < env_cfg.horizon; ++t) {
            const Vec2 a = explore_step(cq, sampler, s, rng);
            const StepResult res = step(s, a, env_cfg);
            result.total_train_collisions += res.collision ? 1 : 0;
            replay.push({s, a, res.r2, res.next_state, res.done});

            if (replay.size() >= min_fill) {
                for (int b = 0; b < cfg.batch_size; ++b) {
                    const Transition& tr = replay.sample(rng);
                    const double v_next = soft_value_under_sampler(
                        cq.q_low(), sampler, tr.s_next, cfg.alpha, cfg.n_value_samples, rng);
                    batch[b] = {tr.s, tr.a, bellman_target(tr.r, tr.done, v_next, cfg.gamma)};
                }
                const TdStepStats st = cq.q_low_mutable().td_step(batch, cfg.lr);
                if (st.mean_abs_q > kDivergenceBound)
                    throw DivergenceError("train_online: mean |Q2~| exceeded " +
                                          std::to_string(kDivergenceBound));
            }
            s = res.next_state;
            if (res.done) break;
        }

        if (replay.size() >= min_fill) {
            for (int k = 0; k < cfg.svgd_updates_per_episode; ++k) {
                for (int i = 0; i < cfg.svgd_batch_states; ++i)
                    svgd_states[i] = replay.sample(rng).s;
                svgd_update(sampler, cq, svgd_states, svgd, rng);
            }
        }

        if (ep % cfg.eval_every == 0 || ep == cfg.episodes) {
            result.reports.push_back(constraint_monitor(cq, sampler, pi1_sampler, env_cfg,
                                                        cfg.eval_rollouts,
                                                        derive_seed(seed, 9000 + ep), ep));
        }
    }
    return result;
}

std::vector<Vec2> default_probe_states(const EnvConfig& cfg) {
    std::vector<Vec2> probes;
    if (!cfg.obstacle_rects.empty()) {
        // Offset rings around each rectangle: edge midpoints and corners
        // pushed out past the collision margin.
        const double off = cfg.collision_margin + 0.03;
        for (const Rect& r : cfg.obstacle_rects) {
            const double cx = 0.5 * (r.xmin + r.xmax);
            const double cy = 0.5 * (r.ymin + r.ymax);
            const Vec2 ring[] = {{r.xmin - off, cy}, {r.xmax + off, cy},
                                 {cx, r.ymin - off}, {cx, r.ymax + off}};
            for (const Vec2& p : ring) {
                const Vec2 q = clamp_unit_square(p);
                if (obstacle_distance(q, cfg) >= cfg.collision_margin) probes.push_back(q);
            }
        }
    }
    const Vec2 free_space[] = {{0.15, 0.15}, {0.85, 0.15}, {0.15, 0.85}, {0.85, 0.85},
                               {0.5, 0.15},  {0.5, 0.5}};
    for (const Vec2& p : free_space)
        if (cfg.obstacle_rects.empty() || obstacle_distance(p, cfg) >= cfg.collision_margin)
            probes.push_back(p);
    return probes;
}

}  // namespace priocomp
