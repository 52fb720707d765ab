#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "rayforge/core.hpp"

namespace testing {

using rayforge::Complex;

// Seeded generators; every property test draws from its own fixed seed.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    Complex in_box(double reLo, double reHi, double imLo, double imHi) {
        return {uniform(reLo, reHi), uniform(imLo, imHi)};
    }
    Complex in_disk(double radius) {
        const double r = radius * std::sqrt(uniform(0.0, 1.0));
        return std::polar(r, uniform(-M_PI, M_PI));
    }

private:
    std::mt19937_64 rng_;
};

// Branch k of the Lambert W function (w e^w = x) by Halley iteration from
// the asymptotic seed log x + 2 pi i k - log(log x + 2 pi i k).
inline Complex lambert_w(Complex x, int k) {
    const Complex L = std::log(x) + Complex{0.0, 2.0 * M_PI * k};
    Complex w = k == 0 ? Complex{0.5, 0.0} : L - std::log(L);
    for (int i = 0; i < 100; ++i) {
        const Complex e = std::exp(w);
        const Complex f = w * e - x;
        const Complex step = f / (e * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(w))) break;
    }
    return w;
}

// Fixed points of lambda e^z: z = -W_k(-lambda).
inline Complex exp_fixed_point(Complex lambda, int k) { return -lambert_w(-lambda, k); }

inline Complex central_difference(const rayforge::MapSpec& map, Complex z, double h = 1e-6) {
    const auto p = rayforge::evaluate(map, z + h);
    const auto m = rayforge::evaluate(map, z - h);
    return (*p - *m) / (2.0 * h);
}

} // namespace testing
