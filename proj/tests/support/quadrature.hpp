#pragma once

#include <cmath>
#include <functional>

#include "priocomp/geometry.hpp"

namespace priocomp::testutil {

/// Trapezoid rule over the square [-half, half]^2 on an n x n grid.
inline double trapezoid_2d(const std::function<double(Vec2)>& f, double half, int n) {
    const double h = 2.0 * half / (n - 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double wx = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        for (int j = 0; j < n; ++j) {
            const double wy = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            acc += wx * wy * f({-half + i * h, -half + j * h});
        }
    }
    return acc * h * h;
}

struct BoxMoments {
    double mass = 0.0;
    Vec2 mean;
    Vec2 var;
};

/// Moments of the density proportional to exp(q/alpha) on the box.
inline BoxMoments density_moments(const std::function<double(Vec2)>& q, double alpha, double half,
                                  int n) {
    auto weight = [&](Vec2 a) { return std::exp(q(a) / alpha); };
    BoxMoments m;
    m.mass = trapezoid_2d(weight, half, n);
    m.mean.x = trapezoid_2d([&](Vec2 a) { return a.x * weight(a); }, half, n) / m.mass;
    m.mean.y = trapezoid_2d([&](Vec2 a) { return a.y * weight(a); }, half, n) / m.mass;
    m.var.x = trapezoid_2d([&](Vec2 a) { return (a.x - m.mean.x) * (a.x - m.mean.x) * weight(a); },
                           half, n) /
              m.mass;
    m.var.y = trapezoid_2d([&](Vec2 a) { return (a.y - m.mean.y) * (a.y - m.mean.y) * weight(a); },
                           half, n) /
              m.mass;
    return m;
}

}  // namespace priocomp::testutil
