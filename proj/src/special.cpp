#include "fracheat/special.hpp"

#include <cmath>
#include <numbers>

namespace fracheat {

namespace {

// erf(x) for 0 <= x < 3 by its Maclaurin series (alternating; fine for small x).
double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 200; ++k) {
        term *= -x2 / static_cast<double>(k);
        const double add = term / (2.0 * k + 1.0);
        sum += add;
        if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return sum * 2.0 / std::sqrt(std::numbers::pi);
}

// erfc(x) for x >= 3 by the Laplace continued fraction (modified Lentz).
double erfc_cf(double x) {
    const double tiny = 1e-300;
    double f = tiny, c = f, d = 0.0;
    // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + 1/2/(x + 1/(x + 3/2/(x + ...))))
    for (int k = 0; k < 300; ++k) {
        const double a = (k == 0) ? 1.0 : 0.5 * k;
        const double b = x;
        d = b + a * d;
        if (d == 0.0) d = tiny;
        c = b + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x * x) / std::sqrt(std::numbers::pi) * f;
}

} // namespace

double erfc_inhouse(double x) {
    if (x < 0.0) return 2.0 - erfc_inhouse(-x);
    if (x < 3.0) return 1.0 - erf_series(x);
    if (x > 27.0) return 0.0; // below double underflow of exp(-x^2)
    return erfc_cf(x);
}

double normal_cdf(double x) {
    return 0.5 * erfc_inhouse(-x / std::numbers::sqrt2);
}

double bessel_i0(double x) {
    x = std::abs(x);
    if (x < 40.0) {
        // all-positive power series, no cancellation
        const double q = 0.25 * x * x;
        double term = 1.0, sum = 1.0;
        for (int k = 1; k < 400; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum;
    }
    // asymptotic expansion I0(x) ~ e^x/sqrt(2 pi x) (1 + 1/(8x) + 9/(2!(8x)^2) + ...)
    const double inv8x = 1.0 / (8.0 * x);
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd * inv8x / static_cast<double>(k);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return std::exp(x) / std::sqrt(2.0 * std::numbers::pi * x) * sum;
}

} // namespace fracheat
