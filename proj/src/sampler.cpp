#include "priocomp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace priocomp {

void SvgdConfig::validate() const {
    if (n_particles < 1) throw std::invalid_argument("svgd: n_particles must be >= 1");
    if (alpha <= 0.0) throw std::invalid_argument("svgd: alpha must be positive");
    if (lr <= 0.0) throw std::invalid_argument("svgd: lr must be positive");
}

SamplerNet SamplerNet::init(double a_max, int hidden, std::uint64_t seed) {
    if (hidden < 1) throw std::invalid_argument("SamplerNet: hidden must be >= 1");
    if (a_max <= 0.0) throw std::invalid_argument("SamplerNet: a_max must be positive");
    SamplerNet net;
    net.hidden = hidden;
    net.a_max = a_max;
    Rng rng(seed);
    net.w1.resize(static_cast<std::size_t>(hidden) * 4);
    net.b1.assign(hidden, 0.0);
    net.w2.resize(static_cast<std::size_t>(2) * hidden);
    net.b2.assign(2, 0.0);
    for (double& w : net.w1) w = 0.5 * rng.normal();
    const double out_scale = 0.5 / std::sqrt(static_cast<double>(hidden));
    for (double& w : net.w2) w = out_scale * rng.normal();
    return net;
}

namespace {

struct ForwardTrace {
    std::vector<double> h;   // tanh(z1), size hidden
    double t2[2];            // tanh(z2)
    Vec2 input_noise;
    Vec2 state;
    Vec2 action;
};

ForwardTrace forward_trace(const SamplerNet& net, Vec2 s, Vec2 noise) {
    ForwardTrace tr;
    tr.state = s;
    tr.input_noise = noise;
    tr.h.resize(net.hidden);
    const double in[4] = {s.x, s.y, noise.x, noise.y};
    for (int i = 0; i < net.hidden; ++i) {
        double z = net.b1[i];
        const double* row = net.w1.data() + 4 * i;
        for (int k = 0; k < 4; ++k) z += row[k] * in[k];
        tr.h[i] = std::tanh(z);
    }
    for (int o = 0; o < 2; ++o) {
        double z = net.b2[o];
        const double* row = net.w2.data() + net.hidden * o;
        for (int i = 0; i < net.hidden; ++i) z += row[i] * tr.h[i];
        tr.t2[o] = std::tanh(z);
    }
    tr.action = {net.a_max * tr.t2[0], net.a_max * tr.t2[1]};
    return tr;
}

struct ParamGrads {
    std::vector<double> w1, b1, w2, b2;

    explicit ParamGrads(const SamplerNet& net)
        : w1(net.w1.size(), 0.0),
          b1(net.b1.size(), 0.0),
          w2(net.w2.size(), 0.0),
          b2(net.b2.size(), 0.0) {}
};

// Accumulate d(upstream . action)/d(params) for one particle.
void backprop(const SamplerNet& net, const ForwardTrace& tr, Vec2 upstream, double scale,
              ParamGrads& g) {
    double dz2[2];
    const double up[2] = {upstream.x, upstream.y};
    for (int o = 0; o < 2; ++o)
        dz2[o] = scale * up[o] * net.a_max * (1.0 - tr.t2[o] * tr.t2[o]);
    const double in[4] = {tr.state.x, tr.state.y, tr.input_noise.x, tr.input_noise.y};
    std::vector<double> dh(net.hidden, 0.0);
    for (int o = 0; o < 2; ++o) {
        double* gw2 = g.w2.data() + net.hidden * o;
        const double* w2 = net.w2.data() + net.hidden * o;
        for (int i = 0; i < net.hidden; ++i) {
            gw2[i] += dz2[o] * tr.h[i];
            dh[i] += w2[i] * dz2[o];
        }
        g.b2[o] += dz2[o];
    }
    for (int i = 0; i < net.hidden; ++i) {
        const double dz1 = dh[i] * (1.0 - tr.h[i] * tr.h[i]);
        double* gw1 = g.w1.data() + 4 * i;
        for (int k = 0; k < 4; ++k) gw1[k] += dz1 * in[k];
        g.b1[i] += dz1;
    }
}

double median_sq_distance(std::span<const Vec2> pts) {
    std::vector<double> d2;
    d2.reserve(pts.size() * (pts.size() - 1) / 2);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) d2.push_back((pts[i] - pts[j]).norm_sq());
    if (d2.empty()) return 1.0;
    const std::size_t mid = d2.size() / 2;
    std::nth_element(d2.begin(), d2.begin() + mid, d2.end());
    return d2[mid];
}

}  // namespace

Vec2 SamplerNet::forward(Vec2 s, Vec2 noise) const { return forward_trace(*this, s, noise).action; }

Vec2 SamplerNet::sample(Vec2 s, Rng& rng) const { return forward(s, rng.normal2()); }

Policy policy_from_sampler(const SamplerNet& net) {
    return [&net](Vec2 s, Rng& rng) { return net.sample(s, rng); };
}

std::vector<Vec2> svgd_drift(std::span<const Vec2> particles, std::span<const Vec2> grads,
                             double alpha) {
    const std::size_t n = particles.size();
    if (grads.size() != n) throw std::invalid_argument("svgd_drift: size mismatch");
    const double med2 = median_sq_distance(particles);
    const double band = std::max(med2, 1e-12);
    std::vector<Vec2> drift(n);
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 acc{0, 0};
        for (std::size_t j = 0; j < n; ++j) {
            const Vec2 diff = particles[j] - particles[i];
            const double k = std::exp(-diff.norm_sq() / band);
            acc.x += k * grads[j].x + alpha * (-2.0 / band) * diff.x * k;
            acc.y += k * grads[j].y + alpha * (-2.0 / band) * diff.y * k;
        }
        drift[i] = acc * (1.0 / static_cast<double>(n));
    }
    return drift;
}

namespace {

void apply_adam(std::vector<double*> params, const std::vector<const double*>& grads,
                std::size_t n, double lr, AdamState& adam) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    if (adam.m.size() != n) {
        adam.m.assign(n, 0.0);
        adam.v.assign(n, 0.0);
        adam.t = 0;
    }
    ++adam.t;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(adam.t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(adam.t));
    for (std::size_t i = 0; i < n; ++i) {
        const double g = *grads[i];
        adam.m[i] = b1 * adam.m[i] + (1.0 - b1) * g;
        adam.v[i] = b2 * adam.v[i] + (1.0 - b2) * g * g;
        *params[i] += lr * (adam.m[i] / c1) / (std::sqrt(adam.v[i] / c2) + eps);
    }
}

}  // namespace

void svgd_update(SamplerNet& net, const QFunction& target, std::span<const Vec2> states,
                 const SvgdConfig& cfg, Rng& rng, SvgdStats* stats, AdamState* adam) {
    cfg.validate();
    if (states.empty()) return;
    ParamGrads acc(net);
    int used_states = 0;
    std::vector<ForwardTrace> traces;
    std::vector<Vec2> particles(cfg.n_particles);
    std::vector<Vec2> grads(cfg.n_particles);
    for (const Vec2& s : states) {
        traces.clear();
        for (int p = 0; p < cfg.n_particles; ++p) {
            traces.push_back(forward_trace(net, s, rng.normal2()));
            particles[p] = traces.back().action;
        }
        const auto grad_at = target.action_grad_evaluator(s);
        bool finite = true;
        for (int p = 0; p < cfg.n_particles; ++p) {
            grads[p] = grad_at(particles[p]);
            if (!std::isfinite(grads[p].x) || !std::isfinite(grads[p].y)) finite = false;
        }
        if (!finite) {
            if (stats) ++stats->skipped;
            continue;
        }
        const std::vector<Vec2> drift = svgd_drift(particles, grads, cfg.alpha);
        for (const Vec2& d : drift)
            if (!std::isfinite(d.x) || !std::isfinite(d.y)) finite = false;
        if (!finite) {
            if (stats) ++stats->skipped;
            continue;
        }
        const double scale = 1.0 / static_cast<double>(cfg.n_particles);
        for (int p = 0; p < cfg.n_particles; ++p) backprop(net, traces[p], drift[p], scale, acc);
        ++used_states;
    }
    if (used_states == 0) return;
    const double inv_states = 1.0 / static_cast<double>(used_states);
    if (adam != nullptr) {
        std::vector<double*> params;
        std::vector<const double*> grads;
        auto collect = [&](std::vector<double>& p, std::vector<double>& g) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                params.push_back(&p[i]);
                g[i] *= inv_states;
                grads.push_back(&g[i]);
            }
        };
        collect(net.w1, acc.w1);
        collect(net.b1, acc.b1);
        collect(net.w2, acc.w2);
        collect(net.b2, acc.b2);
        const std::size_t n_params = params.size();
        apply_adam(std::move(params), grads, n_params, cfg.lr, *adam);
        return;
    }
    const double step = cfg.lr * inv_states;
    for (std::size_t i = 0; i < net.w1.size(); ++i) net.w1[i] += step * acc.w1[i];
    for (std::size_t i = 0; i < net.b1.size(); ++i) net.b1[i] += step * acc.b1[i];
    for (std::size_t i = 0; i < net.w2.size(); ++i) net.w2[i] += step * acc.w2[i];
    for (std::size_t i = 0; i < net.b2.size(); ++i) net.b2[i] += step * acc.b2[i];
}

namespace {

double reflect_into(double x, double lo, double hi) {
    const double width = hi - lo;
    for (int guard = 0; guard < 64 && (x < lo || x > hi); ++guard) {
        if (x < lo) x = 2.0 * lo - x;
        if (x > hi) x = 2.0 * hi - x;
    }
    return clamp(x, lo, hi);
}

}  // namespace

std::vector<Vec2> mcmc_oracle(const QFunction& target, Vec2 s, double alpha, int n_samples,
                              int burn_in, Rng& rng, double a_max, McmcStats* stats) {
    if (n_samples < 1) throw std::invalid_argument("mcmc_oracle: n_samples must be >= 1");
    if (alpha <= 0.0) throw std::invalid_argument("mcmc_oracle: alpha must be positive");
    const auto q = target.action_evaluator(s);
    const double prop_std = 0.1 * (2.0 * a_max);
    constexpr int kThin = 5;

    Vec2 a{0, 0};
    double qa = q(a);
    std::vector<Vec2> out;
    out.reserve(n_samples);
    const long total = static_cast<long>(burn_in) + static_cast<long>(kThin) * n_samples;
    for (long it = 1; it <= total; ++it) {
        const Vec2 noise = rng.normal2();
        Vec2 prop{reflect_into(a.x + prop_std * noise.x, -a_max, a_max),
                  reflect_into(a.y + prop_std * noise.y, -a_max, a_max)};
        const double qp = q(prop);
        const double log_ratio = (qp - qa) / alpha;
        bool accept = log_ratio >= 0.0;
        if (!accept) accept = rng.uniform() < std::exp(log_ratio);
        if (accept) {
            a = prop;
            qa = qp;
        }
        if (stats) {
            stats->accepted += accept ? 1 : 0;
            ++stats->total;
        }
        if (it > burn_in && (it - burn_in) % kThin == 0) out.push_back(a);
    }
    return out;
}

}  // namespace priocomp
