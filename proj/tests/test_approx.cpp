#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "priocomp/rbf.hpp"
#include "priocomp/rng.hpp"
#include "support/lstsq.hpp"
#include "support/testutil.hpp"

using namespace priocomp;
using testutil::rel_err;

TEST_CASE("gaussian peak: value, zero gradient, -w0/b^2 x identity Hessian") {
    const double w0 = 1.7, b = 0.1;
    const Vec2 s{0.4, 0.6}, a{0.02, -0.01};
    const RbfQNet net = testutil::single_peak_net(s, a, w0, b);
    const DerivativeBundle d = net.eval_with_derivatives(s, a);
    CHECK(d.value == doctest::Approx(w0).epsilon(1e-14));
    CHECK(d.grad.x == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d.grad.y == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(d.hess.xx == doctest::Approx(-w0 / (b * b)).epsilon(1e-12));
    CHECK(d.hess.yy == doctest::Approx(-w0 / (b * b)).epsilon(1e-12));
    CHECK(d.hess.xy == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero weights give an identically zero bundle") {
    RbfQNet net = RbfQNet::grid(4, 4, 3, 0.05);
    const DerivativeBundle d = net.eval_with_derivatives({0.3, 0.3}, {0.01, 0.01});
    CHECK(d.value == 0.0);
    CHECK(d.grad.x == 0.0);
    CHECK(d.hess.xx == 0.0);
    CHECK(d.hess.xy == 0.0);
}

TEST_CASE("analytic derivatives match the finite-difference oracle") {
    Rng rng(42);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const RbfQNet net = testutil::random_net(rng);
        const Vec2 s{rng.uniform(), rng.uniform()};
        const Vec2 a{rng.uniform(-0.04, 0.04), rng.uniform(-0.04, 0.04)};
        const DerivativeBundle an = net.eval_with_derivatives(s, a);
        const DerivativeBundle fd = fd_oracle(net, s, a, 1e-4);
        const double scale = std::max({std::abs(an.grad.x), std::abs(an.grad.y),
                                       std::abs(an.hess.xx), std::abs(an.hess.yy),
                                       std::abs(an.hess.xy), 1.0});
        worst = std::max(worst, std::abs(an.grad.x - fd.grad.x) / scale);
        worst = std::max(worst, std::abs(an.grad.y - fd.grad.y) / scale);
        worst = std::max(worst, std::abs(an.hess.xx - fd.hess.xx) / scale);
        worst = std::max(worst, std::abs(an.hess.yy - fd.hess.yy) / scale);
        worst = std::max(worst, std::abs(an.hess.xy - fd.hess.xy) / scale);
    }
    CHECK(worst < 1e-5);
}

TEST_CASE("grid nets agree with the oracle too") {
    Rng rng(7);
    RbfQNet net = RbfQNet::grid(8, 8, 5, 0.05);
    std::vector<double> w(net.size());
    for (double& v : w) v = rng.uniform(-1.0, 1.0);
    net.set_weights(w);
    REQUIRE(net.has_grid());
    for (int trial = 0; trial < 20; ++trial) {
        const Vec2 s{rng.uniform(), rng.uniform()};
        const Vec2 a{rng.uniform(-0.04, 0.04), rng.uniform(-0.04, 0.04)};
        const DerivativeBundle an = net.eval_with_derivatives(s, a);
        const DerivativeBundle fd = fd_oracle(net, s, a, 1e-4);
        const double scale = std::max(std::abs(fd.grad.x), 1.0);
        CHECK(std::abs(an.grad.x - fd.grad.x) / scale < 1e-5);
        CHECK(std::abs(an.hess.xy - fd.hess.xy) / std::max(std::abs(fd.hess.xy), 1.0) < 1e-5);
    }
}

TEST_CASE("grid fast path equals the generic per-center path") {
    Rng rng(99);
    RbfQNet grid_net = RbfQNet::grid(6, 5, 4, 0.05);
    std::vector<double> w(grid_net.size());
    for (double& v : w) v = rng.uniform(-1.0, 1.0);
    grid_net.set_weights(w);
    REQUIRE(grid_net.has_grid());
    // Same centers fed through a shuffled order lose the grid layout and
    // take the generic path.
    auto centers = grid_net.centers();
    auto weights = grid_net.weights();
    std::swap(centers[0], centers[1]);
    std::swap(weights[0], weights[1]);
    const RbfQNet generic(centers, weights, grid_net.bandwidth());
    REQUIRE_FALSE(generic.has_grid());
    for (int trial = 0; trial < 30; ++trial) {
        const Vec2 s{rng.uniform(), rng.uniform()};
        const Vec2 a{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
        const DerivativeBundle dg = grid_net.eval_with_derivatives(s, a);
        const DerivativeBundle dn = generic.eval_with_derivatives(s, a);
        CHECK(rel_err(dg.value, dn.value) < 1e-12);
        CHECK(std::abs(dg.grad.x - dn.grad.x) < 1e-9);
        CHECK(std::abs(dg.hess.xx - dn.hess.xx) < 1e-6);
    }
}

TEST_CASE("fd_oracle sanity: near-linear and constant surrogates") {
    // Two symmetric centers with a large bandwidth approximate a linear
    // ramp in the action near the midpoint: gradient matches the two-point
    // slope estimate and the Hessian nearly vanishes.
    const double b = 5.0;
    const RbfQNet ramp({{0.5, 0.5, 0.04, 0.0}, {0.5, 0.5, -0.04, 0.0}}, {1.0, -1.0}, b);
    const Vec2 s{0.5, 0.5};
    const DerivativeBundle fd = fd_oracle(ramp, s, {0.0, 0.0}, 1e-4);
    const double slope =
        (ramp.value(s, {0.001, 0.0}) - ramp.value(s, {-0.001, 0.0})) / 0.002;
    CHECK(rel_err(fd.grad.x, slope) < 1e-4);
    CHECK(std::abs(fd.hess.xx) < 1e-4);
    CHECK(std::abs(fd.grad.y) < 1e-12);

    const RbfQNet flat({{0.5, 0.5, 0.0, 0.0}}, {0.0}, 0.1);
    const DerivativeBundle fdc = fd_oracle(flat, s, {0.01, 0.01}, 1e-4);
    CHECK(fdc.grad.x == 0.0);
    CHECK(fdc.hess.xx == 0.0);
}

TEST_CASE("hessian symmetry and boundedness") {
    Rng rng(1);
    for (int trial = 0; trial < 200; ++trial) {
        const RbfQNet net = testutil::random_net(rng);
        const Vec2 s{rng.uniform(), rng.uniform()};
        const Vec2 a{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
        // The symmetric storage makes H = H^T structural; |Q| <= sum |w|.
        CHECK(std::abs(net.value(s, a)) <= net.weight_l1() + 1e-12);
    }
}

TEST_CASE("td_step: zero residual batch leaves weights unchanged") {
    Rng rng(3);
    RbfQNet net = testutil::random_net(rng, 12);
    const std::vector<double> before = net.weights();
    std::vector<TdSample> batch;
    for (int i = 0; i < 8; ++i) {
        const Vec2 s{rng.uniform(), rng.uniform()};
        const Vec2 a{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
        batch.push_back({s, a, net.value(s, a)});
    }
    const TdStepStats st = net.td_step(batch, 0.1);
    CHECK(st.mse == doctest::Approx(0.0).epsilon(1e-20));
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(net.weights()[i] == doctest::Approx(before[i]).epsilon(1e-15));
}

TEST_CASE("td_step: single sample on its own unit-activation center") {
    const Vec2 s{0.5, 0.5}, a{0.0, 0.0};
    RbfQNet net = testutil::single_peak_net(s, a, 0.2, 0.1);
    const double lr = 0.05, target = 1.0;
    const double value = net.value(s, a);  // = 0.2, activation exactly 1
    const std::vector<TdSample> batch{{s, a, target}};
    net.td_step(batch, lr);
    // Hand gradient of the squared error through a unit activation.
    const double expected = 0.2 + lr * 2.0 * (target - value) * 1.0;
    CHECK(net.weights()[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("td_step: empty batch is a no-op") {
    Rng rng(9);
    RbfQNet net = testutil::random_net(rng, 6);
    const std::vector<double> before = net.weights();
    const TdStepStats st = net.td_step({}, 0.1);
    CHECK(st.mse == 0.0);
    CHECK(net.weights() == before);
}

TEST_CASE("td_step: MSE is non-increasing on a fixed batch") {
    Rng rng(17);
    RbfQNet net = testutil::random_net(rng, 15);
    std::vector<TdSample> batch;
    for (int i = 0; i < 20; ++i)
        batch.push_back({{rng.uniform(), rng.uniform()},
                         {rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)},
                         rng.uniform(-1.0, 1.0)});
    double prev = net.td_step(batch, 1e-2).mse;
    for (int it = 0; it < 50; ++it) {
        const double cur = net.td_step(batch, 1e-2).mse;
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("td_step iterates converge to the normal-equations solution") {
    // 10 well-separated centers (spacing 3.5x bandwidth) keep the Gram
    // matrix well conditioned, so plain gradient descent reaches the
    // least-squares solution.
    Rng rng(23);
    std::vector<RbfQNet::Center> centers;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 2; ++j)
            centers.push_back({0.1 + 0.2 * i, 0.25 + 0.5 * j, 0.0, 0.0});
    RbfQNet net(centers, std::vector<double>(10, 0.0), 0.055);

    std::vector<TdSample> batch;
    std::vector<std::vector<double>> phi;
    std::vector<double> y;
    for (const auto& c : centers) {
        for (int k = 0; k < 4; ++k) {
            const Vec2 s{c[0] + rng.uniform(-0.03, 0.03), c[1] + rng.uniform(-0.03, 0.03)};
            const Vec2 a{rng.uniform(-0.05, 0.05), rng.uniform(-0.05, 0.05)};
            const double target = rng.uniform(-1.0, 1.0);
            batch.push_back({s, a, target});
            phi.push_back(net.activations(s, a));
            y.push_back(target);
        }
    }
    const std::vector<double> direct = testutil::lstsq_normal_equations(phi, y);
    for (int it = 0; it < 20000; ++it) net.td_step(batch, 0.2);
    double max_gap = 0.0;
    for (std::size_t i = 0; i < direct.size(); ++i)
        max_gap = std::max(max_gap, std::abs(direct[i] - net.weights()[i]));
    CHECK(max_gap < 1e-3);
}

TEST_CASE("grid detection survives serialization-grade copies") {
    const RbfQNet net = RbfQNet::default_grid(0.05);
    CHECK(net.has_grid());
    CHECK(net.size() == 20 * 20 * 5 * 5);
    CHECK(net.bandwidth() == doctest::Approx(1.5 / 19.0).epsilon(1e-15));
    const RbfQNet copy(net.centers(), net.weights(), net.bandwidth());
    CHECK(copy.has_grid());
}
