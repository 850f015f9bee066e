#include "priocomp/rbf.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

namespace priocomp {

std::function<double(Vec2)> QFunction::action_evaluator(Vec2 s) const {
    return [this, s](Vec2 a) { return value(s, a); };
}

std::function<Vec2(Vec2)> QFunction::action_grad_evaluator(Vec2 s) const {
    return [this, s](Vec2 a) { return action_grad(s, a); };
}

namespace {

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline void axis_activations(double q, std::span<const double> axis, double inv2b2,
                             std::vector<double>& out) {
    out.resize(axis.size());
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const double d = q - axis[i];
        out[i] = std::exp(-d * d * inv2b2);
    }
}

}  // namespace

RbfQNet::RbfQNet(std::vector<Center> centers, std::vector<double> weights, double bandwidth)
    : centers_(std::move(centers)), weights_(std::move(weights)), bandwidth_(bandwidth) {
    if (bandwidth_ <= 0.0) throw std::invalid_argument("RbfQNet: bandwidth must be positive");
    if (centers_.size() != weights_.size())
        throw std::invalid_argument("RbfQNet: centers and weights differ in length");
    if (centers_.empty()) throw std::invalid_argument("RbfQNet: needs at least one center");
    detect_grid();
}

void RbfQNet::detect_grid() {
    grid_.reset();
    std::vector<double> xs, ys, as, bs;
    xs.reserve(centers_.size());
    ys.reserve(centers_.size());
    as.reserve(centers_.size());
    bs.reserve(centers_.size());
    for (const Center& c : centers_) {
        xs.push_back(c[0]);
        ys.push_back(c[1]);
        as.push_back(c[2]);
        bs.push_back(c[3]);
    }
    GridInfo g{sorted_unique(xs), sorted_unique(ys), sorted_unique(as), sorted_unique(bs)};
    const std::size_t n =
        g.gx.size() * g.gy.size() * g.ga.size() * g.gb.size();
    if (n != centers_.size()) return;
    // Row-major product order (x, y, dx, dy) must match exactly.
    std::size_t idx = 0;
    for (double x : g.gx)
        for (double y : g.gy)
            for (double a : g.ga)
                for (double b : g.gb) {
                    const Center& c = centers_[idx++];
                    if (c[0] != x || c[1] != y || c[2] != a || c[3] != b) return;
                }
    grid_ = std::move(g);
}

RbfQNet RbfQNet::grid(int nx, int ny, int na, double a_max, double bandwidth_scale) {
    if (nx < 2 || ny < 2 || na < 2) throw std::invalid_argument("RbfQNet::grid: axes need >= 2 points");
    std::vector<Center> centers;
    centers.reserve(static_cast<std::size_t>(nx) * ny * na * na);
    auto lin = [](int i, int n, double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    };
    for (int ix = 0; ix < nx; ++ix)
        for (int iy = 0; iy < ny; ++iy)
            for (int ia = 0; ia < na; ++ia)
                for (int ib = 0; ib < na; ++ib)
                    centers.push_back({lin(ix, nx, 0.0, 1.0), lin(iy, ny, 0.0, 1.0),
                                       lin(ia, na, -a_max, a_max), lin(ib, na, -a_max, a_max)});
    const double spacing = 1.0 / static_cast<double>(nx - 1);
    std::vector<double> w(centers.size(), 0.0);
    return RbfQNet(std::move(centers), std::move(w), bandwidth_scale * spacing);
}

RbfQNet RbfQNet::default_grid(double a_max) { return grid(20, 20, 5, a_max, 1.5); }

RbfQNet::StateSlice RbfQNet::at_state(Vec2 s) const {
    StateSlice slice;
    slice.net_ = this;
    const double inv2b2 = 1.0 / (2.0 * bandwidth_ * bandwidth_);
    if (grid_) {
        const GridInfo& g = *grid_;
        std::vector<double> phix, phiy;
        axis_activations(s.x, g.gx, inv2b2, phix);
        axis_activations(s.y, g.gy, inv2b2, phiy);
        const std::size_t nab = g.ga.size() * g.gb.size();
        slice.state_part_.assign(nab, 0.0);
        std::size_t base = 0;
        for (std::size_t ix = 0; ix < g.gx.size(); ++ix) {
            for (std::size_t iy = 0; iy < g.gy.size(); ++iy) {
                const double c = phix[ix] * phiy[iy];
                const double* w = weights_.data() + base;
                for (std::size_t k = 0; k < nab; ++k) slice.state_part_[k] += c * w[k];
                base += nab;
            }
        }
    } else {
        slice.state_part_.resize(centers_.size());
        for (std::size_t i = 0; i < centers_.size(); ++i) {
            const double dx = s.x - centers_[i][0];
            const double dy = s.y - centers_[i][1];
            slice.state_part_[i] = weights_[i] * std::exp(-(dx * dx + dy * dy) * inv2b2);
        }
    }
    return slice;
}

double RbfQNet::StateSlice::value(Vec2 a) const {
    const RbfQNet& net = *net_;
    const double inv2b2 = 1.0 / (2.0 * net.bandwidth_ * net.bandwidth_);
    if (net.grid_) {
        const auto& g = *net.grid_;
        double acc = 0.0;
        std::size_t k = 0;
        for (std::size_t ia = 0; ia < g.ga.size(); ++ia) {
            const double da = a.x - g.ga[ia];
            const double pa = std::exp(-da * da * inv2b2);
            for (std::size_t ib = 0; ib < g.gb.size(); ++ib, ++k) {
                const double db = a.y - g.gb[ib];
                acc += state_part_[k] * pa * std::exp(-db * db * inv2b2);
            }
        }
        return acc;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < net.centers_.size(); ++i) {
        const double da = a.x - net.centers_[i][2];
        const double db = a.y - net.centers_[i][3];
        acc += state_part_[i] * std::exp(-(da * da + db * db) * inv2b2);
    }
    return acc;
}

Vec2 RbfQNet::StateSlice::grad(Vec2 a) const { return eval(a).grad; }

DerivativeBundle RbfQNet::StateSlice::eval(Vec2 a) const {
    const RbfQNet& net = *net_;
    const double b2 = net.bandwidth_ * net.bandwidth_;
    const double inv2b2 = 0.5 / b2;
    DerivativeBundle out;
    if (net.grid_) {
        const auto& g = *net.grid_;
        std::size_t k = 0;
        for (std::size_t ia = 0; ia < g.ga.size(); ++ia) {
            const double ux = (g.ga[ia] - a.x) / b2;  // d(phi)/dax = phi * ux
            const double da = a.x - g.ga[ia];
            const double pa = std::exp(-da * da * inv2b2);
            for (std::size_t ib = 0; ib < g.gb.size(); ++ib, ++k) {
                const double uy = (g.gb[ib] - a.y) / b2;
                const double db = a.y - g.gb[ib];
                const double p = state_part_[k] * pa * std::exp(-db * db * inv2b2);
                out.value += p;
                out.grad.x += p * ux;
                out.grad.y += p * uy;
                out.hess.xx += p * (ux * ux - 1.0 / b2);
                out.hess.yy += p * (uy * uy - 1.0 / b2);
                out.hess.xy += p * ux * uy;
            }
        }
        return out;
    }
    for (std::size_t i = 0; i < net.centers_.size(); ++i) {
        const double ux = (net.centers_[i][2] - a.x) / b2;
        const double uy = (net.centers_[i][3] - a.y) / b2;
        const double da = a.x - net.centers_[i][2];
        const double db = a.y - net.centers_[i][3];
        const double p = state_part_[i] * std::exp(-(da * da + db * db) * inv2b2);
        out.value += p;
        out.grad.x += p * ux;
        out.grad.y += p * uy;
        out.hess.xx += p * (ux * ux - 1.0 / b2);
        out.hess.yy += p * (uy * uy - 1.0 / b2);
        out.hess.xy += p * ux * uy;
    }
    return out;
}

double RbfQNet::value(Vec2 s, Vec2 a) const { return at_state(s).value(a); }

Vec2 RbfQNet::action_grad(Vec2 s, Vec2 a) const { return at_state(s).eval(a).grad; }

std::function<double(Vec2)> RbfQNet::action_evaluator(Vec2 s) const {
    auto slice = std::make_shared<StateSlice>(at_state(s));
    return [slice](Vec2 a) { return slice->value(a); };
}

std::function<Vec2(Vec2)> RbfQNet::action_grad_evaluator(Vec2 s) const {
    auto slice = std::make_shared<StateSlice>(at_state(s));
    return [slice](Vec2 a) { return slice->grad(a); };
}

DerivativeBundle RbfQNet::eval_with_derivatives(Vec2 s, Vec2 a) const {
    return at_state(s).eval(a);
}

std::vector<double> RbfQNet::activations(Vec2 s, Vec2 a) const {
    const double inv2b2 = 1.0 / (2.0 * bandwidth_ * bandwidth_);
    std::vector<double> phi(centers_.size());
    for (std::size_t i = 0; i < centers_.size(); ++i) {
        const double d0 = s.x - centers_[i][0];
        const double d1 = s.y - centers_[i][1];
        const double d2 = a.x - centers_[i][2];
        const double d3 = a.y - centers_[i][3];
        phi[i] = std::exp(-(d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3) * inv2b2);
    }
    return phi;
}

TdStepStats RbfQNet::td_step(std::span<const TdSample> batch, double lr) {
    TdStepStats stats;
    if (batch.empty()) return stats;
    if (lr <= 0.0) throw std::invalid_argument("td_step: lr must be positive");
    const double inv2b2 = 1.0 / (2.0 * bandwidth_ * bandwidth_);
    const std::size_t n = weights_.size();
    std::vector<double> grad_w(n, 0.0);
    std::vector<double> phi(n);
    const double inv_m = 1.0 / static_cast<double>(batch.size());

    for (const TdSample& sample : batch) {
        // Activation vector and current value in one pass.
        double q = 0.0;
        if (grid_) {
            const GridInfo& g = *grid_;
            std::vector<double> phix, phiy, phia, phib;
            axis_activations(sample.s.x, g.gx, inv2b2, phix);
            axis_activations(sample.s.y, g.gy, inv2b2, phiy);
            axis_activations(sample.a.x, g.ga, inv2b2, phia);
            axis_activations(sample.a.y, g.gb, inv2b2, phib);
            std::size_t idx = 0;
            for (std::size_t ix = 0; ix < g.gx.size(); ++ix)
                for (std::size_t iy = 0; iy < g.gy.size(); ++iy) {
                    const double cxy = phix[ix] * phiy[iy];
                    for (std::size_t ia = 0; ia < g.ga.size(); ++ia) {
                        const double cxya = cxy * phia[ia];
                        for (std::size_t ib = 0; ib < g.gb.size(); ++ib, ++idx) {
                            const double p = cxya * phib[ib];
                            phi[idx] = p;
                            q += weights_[idx] * p;
                        }
                    }
                }
        } else {
            phi = activations(sample.s, sample.a);
            for (std::size_t i = 0; i < n; ++i) q += weights_[i] * phi[i];
        }
        const double res = q - sample.target;
        stats.mse += res * res * inv_m;
        stats.mean_abs_q += std::abs(q) * inv_m;
        const double scale = 2.0 * res * inv_m;
        for (std::size_t i = 0; i < n; ++i) grad_w[i] += scale * phi[i];
    }
    for (std::size_t i = 0; i < n; ++i) weights_[i] -= lr * grad_w[i];
    return stats;
}

void RbfQNet::set_weights(std::vector<double> w) {
    if (w.size() != weights_.size()) throw std::invalid_argument("set_weights: length mismatch");
    weights_ = std::move(w);
}

RbfQNet RbfQNet::negated() const {
    std::vector<double> w = weights_;
    for (double& v : w) v = -v;
    return RbfQNet(centers_, std::move(w), bandwidth_);
}

double RbfQNet::weight_l1() const {
    double acc = 0.0;
    for (double w : weights_) acc += std::abs(w);
    return acc;
}

DerivativeBundle fd_oracle(const QFunction& q, Vec2 s, Vec2 a, double h) {
    if (h <= 0.0) throw std::invalid_argument("fd_oracle: h must be positive");
    auto f = [&](double dx, double dy) { return q.value(s, {a.x + dx, a.y + dy}); };
    DerivativeBundle out;
    const double f00 = f(0, 0);
    out.value = f00;
    out.grad.x = (f(h, 0) - f(-h, 0)) / (2 * h);
    out.grad.y = (f(0, h) - f(0, -h)) / (2 * h);
    out.hess.xx = (f(h, 0) - 2 * f00 + f(-h, 0)) / (h * h);
    out.hess.yy = (f(0, h) - 2 * f00 + f(0, -h)) / (h * h);
    out.hess.xy = (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h);
    return out;
}

}  // namespace priocomp
