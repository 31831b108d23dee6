#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "discendo/disc.hpp"

// Shared helpers for the test binaries: seeded sampling of interior points,
// a high-order finite-difference derivative, a Durand-Kerner polynomial root
// finder (an eigenvalue oracle independent of any matrix solver), and a
// greedy multiset matcher.

namespace testutil {

using discendo::Complex;

inline Complex random_interior(std::mt19937_64& rng, double max_radius) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = max_radius * std::sqrt(unit(rng));
    const double theta = 2.0 * std::numbers::pi * unit(rng);
    return std::polar(r, theta);
}

// Fourth-order central difference along the real direction; for analytic f
// this approximates f'(z) with error O(h^4).
template <class Fn>
Complex numeric_derivative(Fn&& f, Complex z, double h = 1e-3) {
    return (f(z - 2.0 * h) - 8.0 * f(z - h) + 8.0 * f(z + h) - f(z + 2.0 * h)) / (12.0 * h);
}

// Roots of a monic polynomial lambda^n + c[n-1] lambda^{n-1} + ... + c[0]
// by Durand-Kerner simultaneous iteration.
inline std::vector<Complex> polynomial_roots(const std::vector<Complex>& c) {
    const std::size_t n = c.size();
    std::vector<Complex> roots(n);
    const Complex base(0.4, 0.9);
    Complex seed = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        seed *= base;
        roots[i] = seed;
    }
    auto value = [&](Complex x) {
        Complex acc = 1.0;
        for (std::size_t k = n; k-- > 0;) acc = acc * x + c[k];
        return acc;
    };
    for (int iter = 0; iter < 500; ++iter) {
        double moved = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            Complex denom = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) denom *= roots[i] - roots[j];
            }
            const Complex step = value(roots[i]) / denom;
            roots[i] -= step;
            moved = std::max(moved, std::abs(step));
        }
        if (moved < 1e-14) break;
    }
    return roots;
}

// Characteristic polynomial of a 3x3 matrix (row-major), as monic
// coefficients {c0, c1, c2}: lambda^3 + c2 lambda^2 + c1 lambda + c0.
inline std::vector<Complex> char_poly_3x3(const Complex m[3][3]) {
    const Complex tr = m[0][0] + m[1][1] + m[2][2];
    const Complex s2 = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) +
                       (m[0][0] * m[2][2] - m[0][2] * m[2][0]) +
                       (m[1][1] * m[2][2] - m[1][2] * m[2][1]);
    const Complex det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                        m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                        m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    return {-det, s2, -tr};
}

// Worst pairwise distance after greedily matching the two multisets
// (largest modulus first, every element consumed exactly once).
inline double match_distance(std::vector<Complex> a, std::vector<Complex> b) {
    auto by_modulus = [](Complex x, Complex y) {
        if (std::abs(x) != std::abs(y)) return std::abs(x) > std::abs(y);
        return std::arg(x) < std::arg(y);
    };
    std::sort(a.begin(), a.end(), by_modulus);
    std::sort(b.begin(), b.end(), by_modulus);
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (Complex x : a) {
        int best = -1;
        double best_dist = 0.0;
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (used[i]) continue;
            const double dist = std::abs(b[i] - x);
            if (best < 0 || dist < best_dist) {
                best = static_cast<int>(i);
                best_dist = dist;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        worst = std::max(worst, best_dist);
    }
    return worst;
}

}  // namespace testutil
