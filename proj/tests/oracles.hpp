#pragma once

// Test-side oracles, independent of the library's evaluation paths.

#include <cmath>
#include <functional>
#include <numbers>

#include "fracheat/numerics.hpp"
#include "fracheat/stable.hpp"

namespace oracles {

// G(t,x) by direct adaptive quadrature of the Fourier integral.
inline double green_quadrature(double a, double delta, double t, double x,
                               double tol = 1e-12) {
    const double c = std::cos(delta * std::numbers::pi / 2.0);
    const double s = std::sin(delta * std::numbers::pi / 2.0);
    auto f = [&](double xi) {
        return std::exp(-t * std::pow(xi, a) * c) *
               std::cos(xi * x + t * std::pow(xi, a) * s);
    };
    const double cutoff = std::pow(42.0 / (t * c), 1.0 / a);
    return fracheat::adaptive_simpson(f, 0.0, cutoff, tol) / std::numbers::pi;
}

// ∫_0^∞ y^b/(1+y^{2+a}) dy by adaptive quadrature with a split at y = 1
// and the exact remainder of the far tail appended.
inline double beta_quadrature(double a, double b) {
    auto f = [&](double y) { return std::pow(y, b) / (1.0 + std::pow(y, 2.0 + a)); };
    const double mid = fracheat::adaptive_simpson(f, 1e-12, 1.0, 1e-12);
    double far = 0.0, hi = 1.0;
    for (int k = 0; k < 40; ++k) {
        const double next = hi * 2.0;
        far += fracheat::adaptive_simpson(f, hi, next, 1e-13);
        hi = next;
        if (std::pow(hi, b - 2.0 - a) / (1.0 + a - b) < 1e-14) break;
    }
    // remainder ~ ∫ y^{b-2-a} dy
    far += std::pow(hi, b - 1.0 - a) / (1.0 + a - b);
    return mid + far;
}

// brute-force space-time self-convolution of f on a coarse lattice:
// (f star f)(t, x) with midpoint time cells and trapezoid space
inline double brute_convolve_st(const std::function<double(double, double)>& f,
                                double t, double x, double L, int n_t, int n_x) {
    const double hs = t / n_t;
    const double hx = 2.0 * L / n_x;
    double acc = 0.0;
    for (int k = 0; k < n_t; ++k) {
        const double s = (k + 0.5) * hs;
        for (int j = 0; j <= n_x; ++j) {
            const double y = -L + j * hx;
            const double w = (j == 0 || j == n_x) ? 0.5 : 1.0;
            acc += w * f(s, y) * f(t - s, x - y);
        }
    }
    return acc * hs * hx;
}

} // namespace oracles
