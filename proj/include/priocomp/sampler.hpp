#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "priocomp/env.hpp"
#include "priocomp/rbf.hpp"
#include "priocomp/rng.hpp"

namespace priocomp {

/// Noise-to-action map a = f(state, noise): two tanh layers with the output
/// scaled to the action box, so emitted actions always respect the bounds.
struct SamplerNet {
    int hidden = 64;
    double a_max = 0.05;
    std::vector<double> w1;  // hidden x 4, row-major
    std::vector<double> b1;  // hidden
    std::vector<double> w2;  // 2 x hidden, row-major
    std::vector<double> b2;  // 2

    static SamplerNet init(double a_max, int hidden, std::uint64_t seed);

    Vec2 forward(Vec2 s, Vec2 noise) const;

    /// Draw noise from the standard normal and map it to an action.
    Vec2 sample(Vec2 s, Rng& rng) const;
};

/// Wrap a sampler as an environment policy.
Policy policy_from_sampler(const SamplerNet& net);

struct SvgdConfig {
    int n_particles = 32;
    double alpha = 0.05;
    double lr = 1e-3;

    void validate() const;
};

struct SvgdStats {
    int skipped = 0;  // states dropped because of non-finite drift
};

/// Optional Adam accumulator for the sampler parameters; sized lazily on
/// first use. Keeping it outside SamplerNet leaves checkpoints plain.
struct AdamState {
    std::vector<double> m, v;
    long t = 0;
};

/// Stein variational drift for one particle set: per particle i,
/// (1/n) sum_j [ kappa(a_j, a_i) grad_j + alpha * d/da_j kappa(a_j, a_i) ],
/// RBF kernel with the median-heuristic bandwidth. Exposed for tests; with a
/// single particle the drift reduces exactly to its Q-gradient.
std::vector<Vec2> svgd_drift(std::span<const Vec2> particles, std::span<const Vec2> grads,
                             double alpha);

/// One amortized-SVGD ascent step on the sampler parameters against
/// pi ~ exp(Q/alpha): draw n_particles actions per state through the net,
/// compute the Stein drift, backpropagate it through the two-layer map.
/// With an AdamState the raw ascent direction goes through Adam; otherwise
/// it is applied as a plain step.
void svgd_update(SamplerNet& net, const QFunction& target, std::span<const Vec2> states,
                 const SvgdConfig& cfg, Rng& rng, SvgdStats* stats = nullptr,
                 AdamState* adam = nullptr);

struct McmcStats {
    long accepted = 0;
    long total = 0;
};

/// Ground-truth sampler for pi ~ exp(Q(s,.)/alpha): random-walk Metropolis on
/// the action box (proposal std 0.1 x box width, reflecting at the bounds),
/// post-burn-in chain thinned by 5.
std::vector<Vec2> mcmc_oracle(const QFunction& target, Vec2 s, double alpha, int n_samples,
                              int burn_in, Rng& rng, double a_max,
                              McmcStats* stats = nullptr);

}  // namespace priocomp
