#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "priocomp/geometry.hpp"

namespace priocomp {

/// Value, action gradient and action Hessian of a Q-function at one point.
struct DerivativeBundle {
    double value = 0.0;
    Vec2 grad;
    Mat2 hess;
};

/// Anything evaluable as Q(s, a) with an action gradient.
class QFunction {
  public:
    virtual ~QFunction() = default;
    virtual double value(Vec2 s, Vec2 a) const = 0;
    virtual Vec2 action_grad(Vec2 s, Vec2 a) const = 0;
    /// Closures for repeated action evaluations at a fixed state. Overrides
    /// cache the state-dependent part.
    virtual std::function<double(Vec2)> action_evaluator(Vec2 s) const;
    virtual std::function<Vec2(Vec2)> action_grad_evaluator(Vec2 s) const;
};

struct TdSample {
    Vec2 s;
    Vec2 a;
    double target = 0.0;
};

struct TdStepStats {
    double mse = 0.0;         // batch MSE before the update
    double mean_abs_q = 0.0;  // divergence guard input
};

/// Q(s,a) = sum_i w_i exp(-|(s,a) - c_i|^2 / (2 b^2)). Smooth in the action,
/// so value, gradient and Hessian in a all have closed forms. Weights are the
/// only trainable parameters; centers and bandwidth stay fixed.
///
/// When the centers form a cartesian grid (the default construction), the
/// Gaussian factorizes per axis and evaluation runs on contracted per-state
/// tables instead of per-center exponentials. Grid structure is re-detected
/// from the raw center list, so deserialized nets keep the fast path.
class RbfQNet : public QFunction {
  public:
    using Center = std::array<double, 4>;  // (x, y, dx, dy)

    RbfQNet(std::vector<Center> centers, std::vector<double> weights, double bandwidth);

    /// nx*ny position centers over [0,1]^2 crossed with na*na action centers
    /// over [-a_max, a_max]^2; bandwidth = scale * position spacing.
    static RbfQNet grid(int nx, int ny, int na, double a_max, double bandwidth_scale = 1.5);

    /// Module default: 20x20x5x5 grid, bandwidth 1.5x spacing.
    static RbfQNet default_grid(double a_max);

    double value(Vec2 s, Vec2 a) const override;
    Vec2 action_grad(Vec2 s, Vec2 a) const override;
    std::function<double(Vec2)> action_evaluator(Vec2 s) const override;
    std::function<Vec2(Vec2)> action_grad_evaluator(Vec2 s) const override;

    DerivativeBundle eval_with_derivatives(Vec2 s, Vec2 a) const;

    /// State-conditioned evaluator; holds the contracted state factors.
    class StateSlice {
      public:
        double value(Vec2 a) const;
        Vec2 grad(Vec2 a) const;
        DerivativeBundle eval(Vec2 a) const;

      private:
        friend class RbfQNet;
        const RbfQNet* net_ = nullptr;
        std::vector<double> state_part_;  // grid: na*nb table; generic: per-center factor
    };
    StateSlice at_state(Vec2 s) const;

    /// One gradient step on the batch-mean squared error. Empty batch is a
    /// no-op returning zeros.
    TdStepStats td_step(std::span<const TdSample> batch, double lr);

    /// Activation of every center at (s, a), for tests and oracles.
    std::vector<double> activations(Vec2 s, Vec2 a) const;

    const std::vector<Center>& centers() const { return centers_; }
    const std::vector<double>& weights() const { return weights_; }
    double bandwidth() const { return bandwidth_; }
    std::size_t size() const { return weights_.size(); }
    bool has_grid() const { return grid_.has_value(); }

    void set_weights(std::vector<double> w);

    /// Copy with negated weights (the adversarial low-priority net).
    RbfQNet negated() const;

    /// sum_i |w_i|; pointwise bound on |Q|.
    double weight_l1() const;

  private:
    struct GridInfo {
        std::vector<double> gx, gy, ga, gb;
    };

    void detect_grid();

    std::vector<Center> centers_;
    std::vector<double> weights_;
    double bandwidth_;
    std::optional<GridInfo> grid_;
};

/// Central-difference oracle for value/gradient/Hessian in the action.
/// Independent of the analytic path; uses only Q evaluations.
DerivativeBundle fd_oracle(const QFunction& q, Vec2 s, Vec2 a, double h);

}  // namespace priocomp
