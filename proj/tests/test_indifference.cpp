#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "priocomp/indifference.hpp"
#include "priocomp/rng.hpp"
#include "support/testutil.hpp"

using namespace priocomp;

TEST_CASE("se_kernel identities") {
    CHECK(se_kernel(0.0, 0.0, 1.0, 0.3) == 1.0);
    CHECK(se_kernel(0.0, 0.0, 2.0, 0.3) == 4.0);
    const double l = 0.7;
    CHECK(se_kernel(l, 0.0, 1.0, l) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
    double prev = se_kernel(0.0, 0.0, 1.0, l);
    for (double x = 0.1; x < 3.0; x += 0.1) {
        const double cur = se_kernel(x, 0.0, 1.0, l);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("fermi_dirac identities") {
    const double mu = -1.3, temp = 0.21, kb = 1.0;
    CHECK(std::abs(fermi_dirac(mu, mu, temp, kb) - 0.5) < 1e-12);
    CHECK(std::abs(fermi_dirac(mu + kb * temp * std::log(3.0), mu, temp, kb) - 0.25) < 1e-12);
    CHECK(fermi_dirac(-1e6, mu, temp, kb) == 1.0);  // saturates in double
    CHECK(fermi_dirac(1e6, mu, temp, kb) > 0.0);    // clamped above zero
    CHECK(fermi_dirac(1e6, mu, temp, kb) < 1e-300);
    double prev = 2.0;
    for (double e = -3.0; e < 3.0; e += 0.2) {
        const double cur = fermi_dirac(e, mu, temp, kb);
        CHECK(cur < prev);
        prev = cur;
    }
}

namespace {

WeightParams peak_test_params() {
    WeightParams p;
    p.l = 0.5;
    p.mu = 0.0;
    p.temp = 0.05;
    return p;
}

}  // namespace

TEST_CASE("weight is ~1 at a strict gaussian peak") {
    const Vec2 s{0.5, 0.5}, a_star{0.0, 0.0};
    const RbfQNet q = testutil::single_peak_net(s, a_star, 1.0, 0.1);
    const CompoundQ cq(q, q.negated(), peak_test_params());
    // grad = 0 so kappa = 1; eig_max(H) = -w0/b^2 = -100, far below mu = 0 at
    // temp 0.05, so the Fermi factor saturates.
    CHECK(cq.weight(s, a_star) > 0.95);
}

TEST_CASE("weight collapses where the gradient norm reaches 5l") {
    const Vec2 s{0.5, 0.5}, a_star{0.0, 0.0};
    const double w0 = 1.0, b = 0.1;
    const RbfQNet q = testutil::single_peak_net(s, a_star, w0, b);
    WeightParams p = peak_test_params();  // l = 0.5, so 5l = 2.5
    const CompoundQ cq(q, q.negated(), p);

    // |grad| along the x axis is w0 * r/b^2 * exp(-r^2/2b^2); find r with
    // |grad| = 5l by bisection on the rising branch (r < b).
    auto grad_norm = [&](double r) { return q.eval_with_derivatives(s, {r, 0.0}).grad.norm(); };
    double lo = 0.0, hi = b;
    REQUIRE(grad_norm(hi) > 5.0 * p.l);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (grad_norm(mid) < 5.0 * p.l ? lo : hi) = mid;
    }
    const Vec2 a{0.5 * (lo + hi), 0.0};
    CHECK(grad_norm(a.x) == doctest::Approx(5.0 * p.l).epsilon(1e-6));
    // kappa(5l) = exp(-12.5) < 4e-6 and the Fermi factor is < 1.
    CHECK(cq.weight(s, a) < 4e-6);
}

TEST_CASE("flat q_high gives the degenerate plateau value 1/2 in both modes") {
    const RbfQNet flat({{0.5, 0.5, 0.0, 0.0}}, {0.0}, 0.1);
    WeightParams p = peak_test_params();  // mu = 0
    for (HessianMode mode : {HessianMode::signed_eigen, HessianMode::paper_literal_norm}) {
        p.hessian_mode = mode;
        const CompoundQ cq(flat, flat, p);
        CHECK(cq.weight({0.5, 0.5}, {0.01, -0.02}) == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("weight stays in (0,1) and is monotone in both arguments") {
    Rng rng(31);
    WeightParams p = peak_test_params();
    for (int trial = 0; trial < 1000; ++trial) {
        DerivativeBundle d;
        d.grad = {rng.uniform(-20.0, 20.0), rng.uniform(-20.0, 20.0)};
        d.hess.xx = rng.uniform(-150.0, 150.0);
        d.hess.yy = rng.uniform(-150.0, 150.0);
        d.hess.xy = rng.uniform(-50.0, 50.0);
        const double w = weight_value(d, p);
        CHECK(w > 0.0);
        CHECK(w < 1.0);  // grad is nonzero almost surely, so kappa < 1

        // Non-increasing in |J| at fixed Hessian.
        DerivativeBundle larger = d;
        larger.grad = d.grad * 1.5;
        CHECK(weight_value(larger, p) <= w + 1e-15);

        // Non-increasing in the Fermi argument at fixed Jacobian.
        DerivativeBundle hotter = d;
        hotter.hess.xx = d.hess.xx + 10.0;
        hotter.hess.yy = d.hess.yy + 10.0;
        // eig_max grows when both diagonal entries grow.
        CHECK(weight_value(hotter, p) <= w + 1e-15);
    }
}

TEST_CASE("length scale controls the permissive set area (Fig.-2 behavior)") {
    const Vec2 s{0.5, 0.5};
    const RbfQNet q = testutil::single_peak_net(s, {0.0, 0.0}, 1.0, 0.1);
    WeightParams p = peak_test_params();
    auto area_above_half = [&](double l) {
        WeightParams pl = p;
        pl.l = l;
        const CompoundQ cq(q, q.negated(), pl);
        int count = 0;
        const auto grid = action_grid(41, 0.05);
        for (const Vec2& a : grid)
            if (cq.weight(s, a) > 0.5) ++count;
        return count;
    };
    const int narrow = area_above_half(0.1);
    const int base = area_above_half(0.5);
    const int wide = area_above_half(5.0);
    CHECK(narrow < base);
    CHECK(base < wide);
}

TEST_CASE("compose: zero q_low is the exact identity") {
    Rng rng(4);
    const RbfQNet q_high = testutil::random_net(rng, 20);
    const RbfQNet q_low(q_high.centers(), std::vector<double>(q_high.size(), 0.0),
                        q_high.bandwidth());
    const CompoundQ cq(q_high, q_low, peak_test_params());
    for (int trial = 0; trial < 100; ++trial) {
        const Vec2 s{rng.uniform(), rng.uniform()};
        const Vec2 a{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
        CHECK(cq.value(s, a) == q_high.value(s, a));
    }
}

TEST_CASE("compose: saturated weight recovers additive composition exactly") {
    Rng rng(8);
    // Flat high-priority net: J = 0 everywhere, so kappa = 1 exactly; mu far
    // above the Fermi argument saturates F to 1.0 in double.
    const RbfQNet flat({{0.5, 0.5, 0.0, 0.0}}, {0.0}, 0.1);
    const RbfQNet q_low = testutil::random_net(rng, 15);
    WeightParams p = peak_test_params();
    p.mu = 50.0;
    p.temp = 0.01;
    const CompoundQ cq(flat, q_low, p);
    for (int trial = 0; trial < 100; ++trial) {
        const Vec2 s{rng.uniform(), rng.uniform()};
        const Vec2 a{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
        CHECK(cq.weight(s, a) == 1.0);
        CHECK(cq.value(s, a) == flat.value(s, a) + q_low.value(s, a));
    }
}

TEST_CASE("adversarial q_low cannot move the argmax off the q_high plateau") {
    const Vec2 s{0.5, 0.5};
    const RbfQNet q_high = testutil::single_peak_net(s, {0.01, -0.01}, 1.0, 0.08);
    WeightParams p = peak_test_params();
    p.l = 0.5;
    const CompoundQ cq(q_high, q_high.negated(), p);
    const auto grid = action_grid(21, 0.05);
    for (const Vec2& probe_shift : {Vec2{0, 0}, Vec2{0.2, 0.1}}) {
        const Vec2 probe = s + probe_shift;
        const auto high_slice = q_high.at_state(probe);
        const auto eval = cq.action_evaluator(probe);
        double best_comp = -1e300, q_at_argmax = 0.0, q_max = -1e300;
        for (const Vec2& a : grid) {
            const double comp = eval(a);
            const double qh = high_slice.value(a);
            q_max = std::max(q_max, qh);
            if (comp > best_comp) {
                best_comp = comp;
                q_at_argmax = qh;
            }
        }
        CHECK(q_max - q_at_argmax <= 0.05);
    }
}

TEST_CASE("membership basics and the single-gaussian closed form") {
    const Vec2 s{0.5, 0.5};
    const Vec2 a_star{0.01, -0.02};
    const double b = 0.03;
    const RbfQNet q = testutil::single_peak_net(s, a_star, 1.0, b);
    const double a_max = 0.05;

    const Vec2 mode = mode_action(q, s, a_max);
    CHECK((mode - a_star).norm() < 1e-6);
    CHECK(membership(q, s, mode, 0.0, 0.05, a_max));

    // Member iff exp(-|a - a*|^2 / 2b^2) >= 1 - eps; cross-checked densely.
    const double eps = 0.3;
    const double radius = std::sqrt(-2.0 * b * b * std::log(1.0 - eps));
    int disagreements = 0;
    for (const Vec2& a : action_grid(41, a_max)) {
        const bool in = membership(q, s, a, eps, 0.05, a_max);
        const bool expected = (a - a_star).norm() <= radius + 1e-9;
        if ((a - a_star).norm() > radius - 1e-4 && (a - a_star).norm() < radius + 1e-4)
            continue;  // boundary cells can tip either way numerically
        if (in != expected) ++disagreements;
    }
    CHECK(disagreements == 0);

    // Budget above the full spread of Q(s, .) admits every action.
    const double spread = 1.0;  // peak value w0 = 1, infimum 0
    for (const Vec2& a : action_grid(9, a_max))
        CHECK(membership(q, s, a, spread, 0.05, a_max));
}

TEST_CASE("membership is monotone in epsilon") {
    Rng rng(12);
    for (int trial = 0; trial < 1000; ++trial) {
        const RbfQNet q = testutil::random_net(rng, 10);
        const Vec2 s{rng.uniform(), rng.uniform()};
        const Vec2 a{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
        const double eps = rng.uniform(0.0, 0.5);
        if (membership(q, s, a, eps, 0.05, 0.05))
            CHECK(membership(q, s, a, eps + rng.uniform(0.0, 0.5), 0.05, 0.05));
    }
}

namespace {

// Independent re-evaluation of one calibration grid point.
bool feasible_by_hand(const RbfQNet& q_high, WeightParams p, std::span<const Vec2> probes,
                      double eps, double a_max) {
    for (const Vec2& s : probes) {
        const auto slice = q_high.at_state(s);
        double q_max = -1e300, best_comp = -1e300, q_at = 0.0;
        for (const Vec2& a : action_grid(13, a_max)) {
            const DerivativeBundle d = slice.eval(a);
            q_max = std::max(q_max, d.value);
            const double comp = d.value + weight_value(d, p) * (-d.value);
            if (comp > best_comp) {
                best_comp = comp;
                q_at = d.value;
            }
        }
        if (q_max - q_at > eps) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("calibrate: infinite budget selects the mass-maximizing grid point") {
    const RbfQNet q = testutil::single_peak_net({0.5, 0.5}, {0.0, 0.0}, 1.0, 0.1);
    const std::vector<Vec2> probes{{0.5, 0.5}, {0.3, 0.3}};
    const double inf = std::numeric_limits<double>::infinity();
    const CalibrationResult res = calibrate(q, WeightParams{}, probes, inf, 0.05);
    CHECK(res.feasible);
    // Every report row is feasible, and the winner has the largest mass.
    double best = -1.0;
    for (const CalibrationRow& r : res.report) {
        CHECK(r.feasible);
        best = std::max(best, r.mean_weight);
    }
    bool winner_found = false;
    for (const CalibrationRow& r : res.report)
        if (r.l == res.params.l && r.mu == res.params.mu && r.temp == res.params.temp) {
            winner_found = true;
            CHECK(r.mean_weight == best);
        }
    CHECK(winner_found);
}

TEST_CASE("calibrate: zero budget on a positive single-peak Q falls back restrictively") {
    // With a strictly positive peak, any weight close to 1 at the peak
    // erases it from the adversarial compound, so no grid point is feasible
    // and calibration returns the most restrictive corner with a warning.
    const RbfQNet q = testutil::single_peak_net({0.5, 0.5}, {0.0, 0.0}, 1.0, 0.05);
    const std::vector<Vec2> probes{{0.5, 0.5}};
    const CalibrationResult res = calibrate(q, WeightParams{}, probes, 0.0, 0.05);
    CHECK_FALSE(res.feasible);
    CHECK(res.params.l == doctest::Approx(0.01));
    CHECK(res.params.temp == doctest::Approx(0.01));
    CHECK(res.params.mu == doctest::Approx(-50.0));
    CHECK_FALSE(feasible_by_hand(q, res.params, probes, 0.0, 0.05));

    // Away from the peak the restrictive params gate everything: w < 0.05 at
    // every probe action whose own return loss is positive.
    const auto slice = q.at_state({0.5, 0.5});
    double q_max = -1e300;
    for (const Vec2& a : action_grid(13, 0.05)) q_max = std::max(q_max, slice.value(a));
    const CompoundQ cq(q, q.negated(), res.params);
    for (const Vec2& a : action_grid(13, 0.05)) {
        if (q_max - slice.value(a) > 1e-9) CHECK(cq.weight({0.5, 0.5}, a) < 0.05);
    }
}

TEST_CASE("calibrate is deterministic (idempotent)") {
    const RbfQNet q = testutil::single_peak_net({0.4, 0.6}, {0.01, 0.0}, -0.8, 0.1);
    const std::vector<Vec2> probes{{0.4, 0.6}, {0.8, 0.2}};
    const CalibrationResult a = calibrate(q, WeightParams{}, probes, 0.25, 0.05);
    const CalibrationResult b = calibrate(q, WeightParams{}, probes, 0.25, 0.05);
    CHECK(a.params.l == b.params.l);
    CHECK(a.params.mu == b.params.mu);
    CHECK(a.params.temp == b.params.temp);
    CHECK(a.feasible == b.feasible);
    REQUIRE(a.report.size() == b.report.size());
    for (std::size_t i = 0; i < a.report.size(); ++i)
        CHECK(a.report[i].mean_weight == b.report[i].mean_weight);
}

TEST_CASE("calibrate agrees with an independent grid evaluation") {
    const RbfQNet q = testutil::single_peak_net({0.5, 0.5}, {0.0, 0.0}, -1.0, 0.08);
    const std::vector<Vec2> probes{{0.5, 0.5}, {0.2, 0.8}};
    const double eps = 0.1;
    const CalibrationResult res = calibrate(q, WeightParams{}, probes, eps, 0.05);
    for (const CalibrationRow& row : res.report) {
        WeightParams p;
        p.l = row.l;
        p.mu = row.mu;
        p.temp = row.temp;
        CHECK(row.feasible == feasible_by_hand(q, p, probes, eps, 0.05));
    }
}
