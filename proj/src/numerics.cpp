#include "fracheat/numerics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "fracheat/errors.hpp"

namespace fracheat {

void fft_pow2(std::span<std::complex<double>> data, int sign) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_pow2: size must be a power of two");

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = data[i + k];
                const std::complex<double> v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b,
                             double scale) {
    const std::size_t out_len = a.size() + b.size() - 1;
    std::size_t n = 1;
    while (n < out_len) n <<= 1;

    std::vector<std::complex<double>> fa(n), fb(n);
    std::copy(a.begin(), a.end(), fa.begin());
    std::copy(b.begin(), b.end(), fb.begin());
    fft_pow2(fa, -1);
    fft_pow2(fb, -1);
    for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft_pow2(fa, +1);

    std::vector<double> out(out_len);
    const double inv = scale / static_cast<double>(n);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = fa[i].real() * inv;
    return out;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double lo, double hi,
                   double flo, double fmid, double fhi, double whole, double tol,
                   int depth) {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
    const double flm = f(lm), frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    const double delta = left + right - whole;
    if (depth <= 0) throw QuadratureFailure("adaptive_simpson: max depth reached");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, lo, mid, flo, flm, fmid, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, mid, hi, fmid, frm, fhi, right, 0.5 * tol, depth - 1);
}

} // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo, double hi,
                        double tol, int max_depth) {
    if (!(hi > lo)) return 0.0;
    const double mid = 0.5 * (lo + hi);
    const double flo = f(lo), fmid = f(mid), fhi = f(hi);
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    return simpson_rec(f, lo, hi, flo, fmid, fhi, whole, tol, max_depth);
}

double trapezoid_mass(std::span<const double> values, double h) {
    if (values.size() < 2) return 0.0;
    double s = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) s += values[i];
    return s * h;
}

SlopeFit linear_fit(std::span<const double> x, std::span<const double> y) {
    std::vector<double> w(x.size(), 1.0);
    return weighted_linear_fit(x, y, w);
}

SlopeFit weighted_linear_fit(std::span<const double> x, std::span<const double> y,
                             std::span<const double> w) {
    if (x.size() != y.size() || x.size() != w.size() || x.size() < 2)
        throw std::invalid_argument("weighted_linear_fit: need matching sizes >= 2");
    const int n = static_cast<int>(x.size());
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (int i = 0; i < n; ++i) {
        sw += w[i];
        swx += w[i] * x[i];
        swy += w[i] * y[i];
        swxx += w[i] * x[i] * x[i];
        swxy += w[i] * x[i] * y[i];
    }
    const double det = sw * swxx - swx * swx;
    SlopeFit fit;
    fit.n = n;
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept = (swxx * swy - swx * swxy) / det;

    double ss_res = 0, ss_tot = 0;
    const double ybar = swy / sw;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += w[i] * r * r;
        ss_tot += w[i] * (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    // residual-based slope standard error (unit weights reduce to OLS formula)
    const double dof = std::max(1, n - 2);
    const double sigma2 = ss_res / dof;
    fit.slope_stderr = std::sqrt(sigma2 * sw / det);
    return fit;
}

WilsonInterval wilson_interval(long successes, long trials, double z) {
    if (trials <= 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

MeanStderr jackknife_mean(std::span<const double> samples) {
    const std::size_t n = samples.size();
    MeanStderr out;
    if (n == 0) return out;
    double total = 0.0;
    for (double v : samples) total += v;
    out.mean = total / static_cast<double>(n);
    if (n == 1) return out;
    // jackknife over leave-one-out means
    double ss = 0.0;
    for (double v : samples) {
        const double loo = (total - v) / static_cast<double>(n - 1);
        ss += (loo - out.mean) * (loo - out.mean);
    }
    out.stderr = std::sqrt(ss * static_cast<double>(n - 1) / static_cast<double>(n));
    return out;
}

double golden_max(const std::function<double(double)>& f, double lo, double hi,
                  double xtol) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a), d = a + phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

int thread_count() {
    if (const char* env = std::getenv("FRACHEAT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(n, thread_count());
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace fracheat
