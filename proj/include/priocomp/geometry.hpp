#pragma once

#include <algorithm>
#include <cmath>

namespace priocomp {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    Vec2& operator+=(Vec2 o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
    double norm_sq() const { return x * x + y * y; }
    double norm_inf() const { return std::max(std::abs(x), std::abs(y)); }
};

/// Workspace position (components in [0,1]).
using StateVec = Vec2;
/// Velocity command (components in [-a_max, a_max]).
using ActionVec = Vec2;

/// Symmetric 2x2 matrix stored as {xx, xy, yy}.
struct Mat2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    // Eigenvalues from the closed form for symmetric 2x2 matrices.
    double eig_max() const {
        const double mean = 0.5 * (xx + yy);
        const double r = std::hypot(0.5 * (xx - yy), xy);
        return mean + r;
    }
    double eig_min() const {
        const double mean = 0.5 * (xx + yy);
        const double r = std::hypot(0.5 * (xx - yy), xy);
        return mean - r;
    }
    /// Largest singular value; equals max |eigenvalue| for symmetric input.
    double norm_spectral() const { return std::max(std::abs(eig_max()), std::abs(eig_min())); }
    /// Max absolute row sum.
    double norm_inf() const {
        return std::max(std::abs(xx) + std::abs(xy), std::abs(xy) + std::abs(yy));
    }
};

struct Rect {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 0.0;
    double ymax = 0.0;

    bool contains(Vec2 p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }
    /// Euclidean distance from p to the rectangle (0 inside).
    double distance(Vec2 p) const {
        const double dx = std::max({xmin - p.x, 0.0, p.x - xmax});
        const double dy = std::max({ymin - p.y, 0.0, p.y - ymax});
        return std::hypot(dx, dy);
    }
};

inline double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

inline Vec2 clamp_unit_square(Vec2 p) { return {clamp(p.x, 0.0, 1.0), clamp(p.y, 0.0, 1.0)}; }

inline Vec2 clamp_box(Vec2 a, double a_max) {
    return {clamp(a.x, -a_max, a_max), clamp(a.y, -a_max, a_max)};
}

}  // namespace priocomp
