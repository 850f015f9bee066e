#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "priocomp/geometry.hpp"

namespace priocomp {

/// Seeded random stream. All draws go through explicit helpers so that a
/// given seed produces the same sequence on every run and platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (two uniforms per draw, no cached spare).
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    Vec2 normal2() {
        const double a = normal();
        const double b = normal();
        return {a, b};
    }

    /// Uniform integer in [0, n).
    std::uint64_t integer(std::uint64_t n) { return gen_() % n; }

    /// Derive an independent child stream; deterministic in (parent seed, salt).
    Rng fork(std::uint64_t salt) {
        std::uint64_t s = gen_() ^ (salt * 0x9e3779b97f4a7c15ULL);
        return Rng(s);
    }

  private:
    std::mt19937_64 gen_;
};

/// Stateless seed derivation for per-rollout streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base ^ (salt + 0x9e3779b97f4a7c15ULL + (base << 6) + (base >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace priocomp
