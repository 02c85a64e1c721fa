#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "fracheat/numerics.hpp"
#include "fracheat/special.hpp"

using namespace fracheat;

TEST_CASE("normal cdf matches std::erfc across the line") {
    for (double x = -8.0; x <= 8.0; x += 0.17) {
        const double want = 0.5 * std::erfc(-x / std::sqrt(2.0));
        CHECK(std::abs(normal_cdf(x) - want) < 1e-13);
    }
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("bessel i0 matches the standard library") {
    for (double x : {0.0, 0.3, 1.0, std::sqrt(2.0), 5.0, 20.0, 35.0, 60.0, 120.0}) {
        const double want = std::cyl_bessel_i(0.0, x);
        CHECK(bessel_i0(x) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("fft inverts itself") {
    std::vector<std::complex<double>> v(64);
    for (int i = 0; i < 64; ++i) v[i] = {std::sin(0.3 * i), std::cos(0.11 * i * i)};
    auto w = v;
    fft_pow2(w, -1);
    fft_pow2(w, +1);
    for (int i = 0; i < 64; ++i)
        CHECK(std::abs(w[i] / 64.0 - v[i]) < 1e-12);
}

TEST_CASE("linear convolution against direct sums") {
    const std::vector<double> a{1.0, 2.0, -1.0, 0.5};
    const std::vector<double> b{0.25, -0.5, 3.0};
    const auto c = convolve(a, b, 2.0);
    REQUIRE(c.size() == 6);
    for (std::size_t k = 0; k < c.size(); ++k) {
        double want = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (k >= i && k - i < b.size()) want += a[i] * b[k - i];
        CHECK(c[k] == doctest::Approx(2.0 * want).epsilon(1e-12));
    }
}

TEST_CASE("weighted fit recovers a planted slope") {
    std::vector<double> x, y, w;
    for (int i = 0; i < 12; ++i) {
        x.push_back(0.5 * i);
        y.push_back(3.0 - 0.7 * x.back());
        w.push_back(1.0 + i % 3);
    }
    const SlopeFit fit = weighted_linear_fit(x, y, w);
    CHECK(fit.slope == doctest::Approx(-0.7).epsilon(1e-12));
    CHECK(fit.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("wilson interval brackets the proportion") {
    const auto wi = wilson_interval(30, 100, 2.5758293035489004);
    CHECK(wi.lo > 0.18);
    CHECK(wi.hi < 0.45);
    CHECK(wi.lo < 0.3);
    CHECK(wi.hi > 0.3);
}

TEST_CASE("jackknife stderr equals the classical formula for the mean") {
    std::vector<double> s{1.0, 2.0, 4.0, 8.0, 9.0, 3.5};
    const auto ms = jackknife_mean(s);
    double m = 0;
    for (double v : s) m += v;
    m /= s.size();
    double var = 0;
    for (double v : s) var += (v - m) * (v - m);
    var /= (s.size() - 1);
    CHECK(ms.mean == doctest::Approx(m).epsilon(1e-14));
    CHECK(ms.stderr == doctest::Approx(std::sqrt(var / s.size())).epsilon(1e-12));
}
