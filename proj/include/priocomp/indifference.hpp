#pragma once

#include <span>
#include <vector>

#include "priocomp/rbf.hpp"

namespace priocomp {

enum class HessianMode { signed_eigen, paper_literal_norm };
enum class MatrixNorm { spectral, infinity };

/// Parameters of the indifference weight and the soft-space test.
///
/// hessian_mode signed_eigen feeds the largest Hessian eigenvalue to the
/// Fermi-Dirac step, so only genuinely concave points pass; the literal-norm
/// mode feeds |H| instead and is kept for fidelity experiments. k_b is
/// redundant with temp (only the product enters) and stays fixed at 1.
struct WeightParams {
    double sigma = 1.0;
    double l = 1.0;
    double mu = 0.0;
    double temp = 0.05;
    double k_b = 1.0;
    HessianMode hessian_mode = HessianMode::signed_eigen;
    MatrixNorm matrix_norm = MatrixNorm::spectral;
    double epsilon = 0.25;

    void validate() const;
};

/// Squared-exponential kernel sigma^2 exp(-(x-x')^2 / 2l^2), clamped away
/// from exact zero so downstream weights stay strictly positive.
double se_kernel(double x, double x_prime, double sigma, double l);

/// Fermi-Dirac step 1 / (exp((e - mu) / (k_b temp)) + 1), computed stably and
/// clamped away from exact zero. Saturates to 1.0 in double precision for
/// strongly negative arguments.
double fermi_dirac(double e, double mu, double temp, double k_b);

/// Indifference weight from local first/second-order information of the
/// high-priority Q-function: w = kappa(|J|, 0) * F(hessian statistic).
double weight_value(const DerivativeBundle& d_high, const WeightParams& p);

/// Priority pair: frozen high-priority Q, live low-priority Q, weight
/// parameters. Evaluable as the single compound Q = Q1 + w * Q2.
class CompoundQ : public QFunction {
  public:
    CompoundQ(RbfQNet q_high, RbfQNet q_low, WeightParams params);

    double weight(Vec2 s, Vec2 a) const;
    double value(Vec2 s, Vec2 a) const override;

    /// d/da [Q1 + w Q2]: analytic Q terms, central differences on w (the
    /// exact dw/da needs third derivatives of Q1, which is a non-goal).
    Vec2 action_grad(Vec2 s, Vec2 a) const override;
    std::function<double(Vec2)> action_evaluator(Vec2 s) const override;
    std::function<Vec2(Vec2)> action_grad_evaluator(Vec2 s) const override;

    const RbfQNet& q_high() const { return q_high_; }
    const RbfQNet& q_low() const { return q_low_; }
    RbfQNet& q_low_mutable() { return q_low_; }
    const WeightParams& params() const { return params_; }
    void set_params(const WeightParams& p);

  private:
    const RbfQNet q_high_;  // frozen at construction; no mutating access
    RbfQNet q_low_;
    WeightParams params_;
};

inline double compose(const CompoundQ& cq, Vec2 s, Vec2 a) { return cq.value(s, a); }

/// Approximate maximizer of Q(s, .) over the action box by multi-start
/// projected gradient ascent (deterministic 4x4 start grid).
Vec2 mode_action(const RbfQNet& q, Vec2 s, double a_max, int n_starts = 16, int n_steps = 50);

/// Soft indifference-space test: return loss of a relative to the mode
/// action is at most epsilon. alpha identifies the max-ent policy the mode
/// belongs to; the mode of exp(Q/alpha) is the maximizer of Q for any alpha,
/// so it does not enter the decision.
bool membership(const RbfQNet& q, Vec2 s, Vec2 a, double epsilon, double alpha,
                double a_max);

struct CalibrationRow {
    double l = 0.0;
    double mu = 0.0;
    double temp = 0.0;
    double mean_weight = 0.0;
    double worst_loss = 0.0;
    bool feasible = false;
};

struct CalibrationResult {
    WeightParams params;
    bool feasible = false;  // false: no grid point met the budget, most
                            // restrictive corner returned instead
    std::vector<CalibrationRow> report;
};

/// Grid search over (l, temp, mu): maximize mean weight mass over the probe
/// set subject to the adversarial certificate — with q_low = -q_high, the
/// grid-argmax return loss on q_high stays within epsilon_target at every
/// probe state.
CalibrationResult calibrate(const RbfQNet& q_high, const WeightParams& base,
                            std::span<const Vec2> probe_states, double epsilon_target,
                            double a_max);

/// Evenly spaced n x n action grid over the box, corners included.
std::vector<Vec2> action_grid(int n, double a_max);

}  // namespace priocomp
