#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace fracheat {

/// In-place radix-2 complex FFT, n must be a power of two.
/// sign = -1: forward (e^{-i2pi jk/n}), sign = +1: inverse without the 1/n factor.
void fft_pow2(std::span<std::complex<double>> data, int sign);

/// Linear (zero-padded) convolution of two real sequences, scaled by `scale`.
/// Result length a.size() + b.size() - 1.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b,
                             double scale);

/// Adaptive Simpson quadrature on [lo, hi] with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double tol, int max_depth = 48);

/// Trapezoid rule over a uniform grid with spacing h.
double trapezoid_mass(std::span<const double> values, double h);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 0.0;
    int n = 0;
};

/// Ordinary least squares y = intercept + slope * x with slope standard error.
SlopeFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Weighted least squares; w are inverse-variance weights.
SlopeFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                             std::span<const double> w);

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for a binomial proportion at confidence z (e.g. 2.576 for 99%).
WilsonInterval wilson_interval(long successes, long trials, double z);

/// Sample mean and jackknife standard error of f applied to each sample.
struct MeanStderr {
    double mean = 0.0;
    double stderr = 0.0;
};
MeanStderr jackknife_mean(std::span<const double> samples);

/// Golden-section maximization of f on [lo, hi] to x-tolerance.
double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xtol);

/// Run fn(i) for i in [0, n) on a small thread pool; each index is executed
/// exactly once and results must be written to caller-owned slots.
/// Thread count from FRACHEAT_THREADS, default hardware concurrency.
void parallel_for(int n, const std::function<void(int)>& fn);

int thread_count();

} // namespace fracheat
