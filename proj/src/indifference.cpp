#include "priocomp/indifference.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace priocomp {

namespace {
constexpr double kTiny = std::numeric_limits<double>::min();
}

void WeightParams::validate() const {
    if (sigma != 1.0) throw std::invalid_argument("WeightParams: sigma is fixed at 1");
    if (l <= 0.0) throw std::invalid_argument("WeightParams: l must be positive");
    if (temp <= 0.0) throw std::invalid_argument("WeightParams: temp must be positive");
    if (k_b <= 0.0) throw std::invalid_argument("WeightParams: k_b must be positive");
    if (epsilon < 0.0) throw std::invalid_argument("WeightParams: epsilon must be >= 0");
}

double se_kernel(double x, double x_prime, double sigma, double l) {
    if (l <= 0.0) throw std::invalid_argument("se_kernel: l must be positive");
    const double d = x - x_prime;
    const double v = sigma * sigma * std::exp(-d * d / (2.0 * l * l));
    return std::max(v, kTiny);
}

double fermi_dirac(double e, double mu, double temp, double k_b) {
    if (temp <= 0.0) throw std::invalid_argument("fermi_dirac: temp must be positive");
    const double x = (e - mu) / (k_b * temp);
    double f;
    if (x > 0.0) {
        const double t = std::exp(-x);
        f = t / (1.0 + t);
    } else {
        f = 1.0 / (1.0 + std::exp(x));
    }
    return std::max(f, kTiny);
}

double weight_value(const DerivativeBundle& d_high, const WeightParams& p) {
    double j_norm;
    switch (p.matrix_norm) {
        case MatrixNorm::spectral:
            j_norm = d_high.grad.norm();
            break;
        case MatrixNorm::infinity:
            // 1x2 Jacobian: max absolute row sum.
            j_norm = std::abs(d_high.grad.x) + std::abs(d_high.grad.y);
            break;
        default:
            throw std::logic_error("weight_value: unknown matrix norm");
    }
    double fermi_arg;
    switch (p.hessian_mode) {
        case HessianMode::signed_eigen:
            fermi_arg = d_high.hess.eig_max();
            break;
        case HessianMode::paper_literal_norm:
            fermi_arg = p.matrix_norm == MatrixNorm::spectral ? d_high.hess.norm_spectral()
                                                              : d_high.hess.norm_inf();
            break;
        default:
            throw std::logic_error("weight_value: unknown hessian mode");
    }
    // The product can underflow even with both factors clamped.
    const double w =
        se_kernel(j_norm, 0.0, p.sigma, p.l) * fermi_dirac(fermi_arg, p.mu, p.temp, p.k_b);
    return std::max(w, kTiny);
}

CompoundQ::CompoundQ(RbfQNet q_high, RbfQNet q_low, WeightParams params)
    : q_high_(std::move(q_high)), q_low_(std::move(q_low)), params_(params) {
    params_.validate();
}

void CompoundQ::set_params(const WeightParams& p) {
    p.validate();
    params_ = p;
}

double CompoundQ::weight(Vec2 s, Vec2 a) const {
    return weight_value(q_high_.eval_with_derivatives(s, a), params_);
}

double CompoundQ::value(Vec2 s, Vec2 a) const {
    const DerivativeBundle d = q_high_.eval_with_derivatives(s, a);
    return d.value + weight_value(d, params_) * q_low_.value(s, a);
}

namespace {

Vec2 compound_grad_from_slices(const RbfQNet::StateSlice& high, const RbfQNet::StateSlice& low,
                               const WeightParams& params, Vec2 a) {
    const DerivativeBundle dh = high.eval(a);
    const DerivativeBundle dl = low.eval(a);
    const double w = weight_value(dh, params);

    constexpr double h = 1e-4;
    auto w_at = [&](Vec2 p) { return weight_value(high.eval(p), params); };
    const Vec2 grad_w{(w_at({a.x + h, a.y}) - w_at({a.x - h, a.y})) / (2 * h),
                      (w_at({a.x, a.y + h}) - w_at({a.x, a.y - h})) / (2 * h)};

    return {dh.grad.x + w * dl.grad.x + grad_w.x * dl.value,
            dh.grad.y + w * dl.grad.y + grad_w.y * dl.value};
}

}  // namespace

Vec2 CompoundQ::action_grad(Vec2 s, Vec2 a) const {
    return compound_grad_from_slices(q_high_.at_state(s), q_low_.at_state(s), params_, a);
}

std::function<Vec2(Vec2)> CompoundQ::action_grad_evaluator(Vec2 s) const {
    auto high = std::make_shared<RbfQNet::StateSlice>(q_high_.at_state(s));
    auto low = std::make_shared<RbfQNet::StateSlice>(q_low_.at_state(s));
    const WeightParams p = params_;
    return [high, low, p](Vec2 a) { return compound_grad_from_slices(*high, *low, p, a); };
}

std::function<double(Vec2)> CompoundQ::action_evaluator(Vec2 s) const {
    auto high = std::make_shared<RbfQNet::StateSlice>(q_high_.at_state(s));
    auto low = std::make_shared<RbfQNet::StateSlice>(q_low_.at_state(s));
    const WeightParams p = params_;
    return [high, low, p](Vec2 a) {
        const DerivativeBundle d = high->eval(a);
        return d.value + weight_value(d, p) * low->value(a);
    };
}

Vec2 mode_action(const RbfQNet& q, Vec2 s, double a_max, int n_starts, int n_steps) {
    const auto slice = q.at_state(s);
    const int side = std::max(1, static_cast<int>(std::lround(std::sqrt(double(n_starts)))));
    Vec2 best{0, 0};
    double best_v = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < side; ++i) {
        for (int j = 0; j < side; ++j) {
            Vec2 a{-a_max + 2.0 * a_max * (i + 0.5) / side, -a_max + 2.0 * a_max * (j + 0.5) / side};
            double v = slice.value(a);
            double step_len = 0.5 * a_max;
            for (int it = 0; it < n_steps; ++it) {
                const Vec2 g = slice.grad(a);
                const double gn = g.norm();
                if (gn < 1e-15) break;
                const Vec2 cand = clamp_box({a.x + step_len * g.x / gn, a.y + step_len * g.y / gn},
                                            a_max);
                const double cv = slice.value(cand);
                if (cv > v) {
                    a = cand;
                    v = cv;
                } else {
                    step_len *= 0.5;
                    if (step_len < 1e-12 * a_max) break;
                }
            }
            if (v > best_v) {
                best_v = v;
                best = a;
            }
        }
    }
    return best;
}

bool membership(const RbfQNet& q, Vec2 s, Vec2 a, double epsilon, double alpha, double a_max) {
    if (epsilon < 0.0) throw std::invalid_argument("membership: epsilon must be >= 0");
    if (alpha <= 0.0) throw std::invalid_argument("membership: alpha must be positive");
    const auto slice = q.at_state(s);
    const Vec2 mode = mode_action(q, s, a_max);
    return slice.value(mode) - slice.value(a) <= epsilon;
}

std::vector<Vec2> action_grid(int n, double a_max) {
    if (n < 2) throw std::invalid_argument("action_grid: n must be >= 2");
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            out.push_back({-a_max + 2.0 * a_max * i / (n - 1), -a_max + 2.0 * a_max * j / (n - 1)});
    return out;
}

namespace {

// Logarithmic search grids, 8 points per axis.
std::vector<double> log_axis(double lo, double hi, int n) {
    std::vector<double> v(n);
    const double llo = std::log10(lo), lhi = std::log10(hi);
    for (int i = 0; i < n; ++i) v[i] = std::pow(10.0, llo + (lhi - llo) * i / (n - 1));
    return v;
}

std::vector<double> mu_axis() {
    // 0 plus log-spaced negative magnitudes down to -50.
    std::vector<double> v{0.0};
    const auto mags = log_axis(0.05, 50.0, 7);
    for (double m : mags) v.push_back(-m);
    std::sort(v.begin(), v.end());  // -50 ... 0
    return v;
}

}  // namespace

CalibrationResult calibrate(const RbfQNet& q_high, const WeightParams& base,
                            std::span<const Vec2> probe_states, double epsilon_target,
                            double a_max) {
    if (probe_states.empty()) throw std::invalid_argument("calibrate: probe_states is empty");
    const std::vector<Vec2> actions = action_grid(13, a_max);

    // Derivative bundles are parameter-independent; evaluate once per probe.
    struct ProbeTable {
        std::vector<DerivativeBundle> bundles;  // per action
        double q_max = -std::numeric_limits<double>::infinity();
    };
    std::vector<ProbeTable> tables(probe_states.size());
    for (std::size_t p = 0; p < probe_states.size(); ++p) {
        const auto slice = q_high.at_state(probe_states[p]);
        tables[p].bundles.reserve(actions.size());
        for (const Vec2& a : actions) {
            tables[p].bundles.push_back(slice.eval(a));
            tables[p].q_max = std::max(tables[p].q_max, tables[p].bundles.back().value);
        }
    }

    const std::vector<double> ls = log_axis(0.01, 10.0, 8);
    const std::vector<double> temps = log_axis(0.01, 10.0, 8);
    const std::vector<double> mus = mu_axis();

    CalibrationResult result;
    result.params = base;
    result.feasible = false;
    double best_mass = -1.0;

    for (double l : ls) {
        for (double temp : temps) {
            for (double mu : mus) {
                WeightParams p = base;
                p.l = l;
                p.temp = temp;
                p.mu = mu;
                double mass = 0.0;
                double worst_loss = 0.0;
                bool feasible = true;
                for (const ProbeTable& tab : tables) {
                    double best_comp = -std::numeric_limits<double>::infinity();
                    double q_at_argmax = 0.0;
                    for (const DerivativeBundle& d : tab.bundles) {
                        const double w = weight_value(d, p);
                        mass += w;
                        // Adversarial low-priority Q: q_low = -q_high.
                        const double comp = d.value + w * (-d.value);
                        if (comp > best_comp) {
                            best_comp = comp;
                            q_at_argmax = d.value;
                        }
                    }
                    const double loss = tab.q_max - q_at_argmax;
                    worst_loss = std::max(worst_loss, loss);
                    if (loss > epsilon_target) feasible = false;
                }
                mass /= static_cast<double>(tables.size() * actions.size());
                result.report.push_back({l, mu, temp, mass, worst_loss, feasible});
                if (feasible && mass > best_mass) {
                    best_mass = mass;
                    result.params = p;
                    result.feasible = true;
                }
            }
        }
    }

    if (!result.feasible) {
        // Most restrictive corner: tightest kernel, sharpest and lowest step.
        WeightParams p = base;
        p.l = ls.front();
        p.temp = temps.front();
        p.mu = mus.front();
        result.params = p;
    }
    return result;
}

}  // namespace priocomp
