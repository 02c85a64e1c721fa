#include "fracheat/stable.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>

#include "fracheat/errors.hpp"
#include "fracheat/numerics.hpp"
#include "fracheat/special.hpp"

namespace fracheat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kTailTerms = 3;
constexpr int kAliasTerms = 24;

} // namespace

StableParams make_params(double a, double delta) {
    if (!(a > 1.0) || !(a <= 2.0))
        throw OutOfRange("make_params: a must lie in ]1,2]");
    if (!(std::abs(delta) <= 2.0 - a))
        throw OutOfRange("make_params: |delta| must be <= 2-a");
    return {a, delta};
}

StableDensity::StableDensity(StableParams p) : p_(p) {
    make_params(p.a, p.delta);
    gaussian_ = (p_.a == 2.0);
    n_ = static_cast<int>(2.0 * x_core_ / dz_) + 1;

    // Asymptotic tail coefficients: G(1,z) ~ sum_n C_n |z|^{-1-na} with
    // C_n = (-1)^{n+1}/(pi n!) Gamma(1+na) sin(n pi (a -+ delta)/2)
    // (minus sign for the right tail, plus for the left).
    for (int n = 1; n <= kTailTerms; ++n) {
        const double common = ((n % 2 == 1) ? 1.0 : -1.0) / (kPi * std::tgamma(n + 1.0)) *
                              std::tgamma(1.0 + n * p_.a);
        right_coef_[n - 1] = common * std::sin(n * kPi * (p_.a - p_.delta) / 2.0);
        left_coef_[n - 1] = common * std::sin(n * kPi * (p_.a + p_.delta) / 2.0);
    }
    if (gaussian_) {
        right_coef_[0] = right_coef_[1] = right_coef_[2] = 0.0;
        left_coef_[0] = left_coef_[1] = left_coef_[2] = 0.0;
    }

    build_table();

    // supremum of the t=1 density by grid scan plus golden refinement
    int imax = 0;
    for (int i = 1; i < n_; ++i)
        if (val_[i] > val_[imax]) imax = i;
    const double zlo = -x_core_ + std::max(0, imax - 2) * dz_;
    const double zhi = -x_core_ + std::min(n_ - 1, imax + 2) * dz_;
    sup_loc_ = golden_max([this](double z) { return density1(z); }, zlo, zhi, 1e-12);
    sup_value_ = density1(sup_loc_);

    // fitted envelope constants (empirical, not transcribed from references)
    k0_ = 0.0;
    k1_ = 0.0;
    for (int i = 0; i < n_; ++i) {
        const double z = std::abs(-x_core_ + i * dz_);
        k0_ = std::max(k0_, val_[i] * (1.0 + std::pow(z, 1.0 + p_.a)));
        k1_ = std::max(k1_, std::abs(dval_[i]) * (1.0 + std::pow(z, 2.0 + p_.a)));
    }
    // the tail series contributes its leading constants in the limit
    k0_ = std::max(k0_, std::max(right_coef_[0], left_coef_[0]));
    k1_ = std::max(k1_, (1.0 + p_.a) * std::max(right_coef_[0], left_coef_[0]));

    // mass self-check: table plus analytic tails must account for everything
    const double total = core_cdf(x_core_) + tail_mass_right(x_core_);
    if (std::abs(total - 1.0) > 1e-7)
        throw QuadratureFailure("StableDensity: mass self-check failed");
    if (im_residue_ > 1e-9)
        throw QuadratureFailure("StableDensity: imaginary residue too large");
}

void StableDensity::build_table() {
    val_.assign(n_, 0.0);
    dval_.assign(n_, 0.0);

    if (gaussian_) {
        for (int i = 0; i < n_; ++i) {
            const double z = -x_core_ + i * dz_;
            const double g = std::exp(-0.25 * z * z) / (2.0 * std::sqrt(kPi));
            val_[i] = g;
            dval_[i] = -0.5 * z * g;
        }
        im_residue_ = 0.0;
    } else {
        // One inverse-FFT pass of the characteristic function. The uniform
        // xi-grid makes the discrete sum equal to the periodization of G
        // (Poisson summation); the wrapped tails are then subtracted with the
        // asymptotic series, which is accurate far beyond the core window.
        const std::size_t N = 1u << 17;
        const double period = N * dz_; // 1024
        const double dxi = 2.0 * kPi / period;
        const double cos_th = std::cos(p_.delta * kPi / 2.0);
        const double sin_th = std::sin(p_.delta * kPi / 2.0);

        std::vector<std::complex<double>> spec(N), dspec(N);
        for (std::size_t k = 0; k < N; ++k) {
            const double xi = (k <= N / 2 ? static_cast<double>(k)
                                          : static_cast<double>(k) - static_cast<double>(N)) *
                              dxi;
            const double mag = std::pow(std::abs(xi), p_.a);
            const double re = -mag * cos_th;
            if (re < -745.0) { spec[k] = 0.0; dspec[k] = 0.0; continue; }
            const double im = (xi >= 0.0 ? mag * sin_th : -mag * sin_th);
            const std::complex<double> g = std::exp(std::complex<double>(re, im));
            spec[k] = g;
            dspec[k] = std::complex<double>(0.0, xi) * g;
        }
        fft_pow2(spec, +1);
        fft_pow2(dspec, +1);

        const double scale = 1.0 / (static_cast<double>(N) * dz_);
        im_residue_ = 0.0;
        const int half = (n_ - 1) / 2; // index of z = 0
        for (int i = 0; i < n_; ++i) {
            const int j = i - half; // signed grid index
            const std::size_t idx = j >= 0 ? static_cast<std::size_t>(j)
                                           : N + static_cast<std::size_t>(j);
            val_[i] = spec[idx].real() * scale;
            dval_[i] = dspec[idx].real() * scale;
            im_residue_ = std::max(im_residue_, std::abs(spec[idx].imag()) * scale);
        }
        // subtract the wrapped-around tails; the sum beyond kAliasTerms is
        // replaced by its midpoint-rule integral (leading tail term only)
        const double mfar = (kAliasTerms + 0.5) * period;
        for (int i = 0; i < n_; ++i) {
            const double z = -x_core_ + i * dz_;
            for (int m = 1; m <= kAliasTerms; ++m) {
                val_[i] -= tail_series(z + m * period) + tail_series(z - m * period);
                dval_[i] -= tail_series_derivative(z + m * period) +
                            tail_series_derivative(z - m * period);
            }
            val_[i] -= (right_coef_[0] * std::pow(mfar + z, -p_.a) +
                        left_coef_[0] * std::pow(mfar - z, -p_.a)) /
                       (p_.a * period);
        }
    }

    // cumulative distribution over the core, corrected trapezoid
    // (exact for the cubic Hermite interpolant between nodes)
    cum_.assign(n_, 0.0);
    cum_[0] = tail_mass_left(-x_core_);
    for (int i = 0; i + 1 < n_; ++i) {
        const double cell = 0.5 * dz_ * (val_[i] + val_[i + 1]) +
                            dz_ * dz_ / 12.0 * (dval_[i] - dval_[i + 1]);
        cum_[i + 1] = cum_[i] + cell;
    }
}

double StableDensity::tail_series(double z) const {
    const double w = std::abs(z);
    const double* c = z >= 0.0 ? right_coef_ : left_coef_;
    const double wa = std::pow(w, p_.a);
    double s = 0.0, f = 1.0 / (w * wa);
    for (int n = 0; n < kTailTerms; ++n) {
        s += c[n] * f;
        f /= wa;
    }
    return s;
}

double StableDensity::tail_series_derivative(double z) const {
    const double w = std::abs(z);
    const double* c = z >= 0.0 ? right_coef_ : left_coef_;
    const double wa = std::pow(w, p_.a);
    double s = 0.0, f = 1.0 / (w * w * wa);
    for (int n = 0; n < kTailTerms; ++n) {
        s += -(1.0 + (n + 1) * p_.a) * c[n] * f;
        f /= wa;
    }
    return z >= 0.0 ? s : -s;
}

double StableDensity::core_value(double z) const {
    const double u = (z + x_core_) / dz_;
    int i = static_cast<int>(u);
    i = std::clamp(i, 0, n_ - 2);
    const double s = u - i;
    // cubic Hermite with tabulated derivatives
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return h00 * val_[i] + h01 * val_[i + 1] +
           dz_ * (h10 * dval_[i] + h11 * dval_[i + 1]);
}

double StableDensity::core_derivative(double z) const {
    const double u = (z + x_core_) / dz_;
    int i = static_cast<int>(u);
    i = std::clamp(i, 0, n_ - 2);
    const double s = u - i;
    return (1.0 - s) * dval_[i] + s * dval_[i + 1];
}

double StableDensity::core_cdf(double z) const {
    const double u = (z + x_core_) / dz_;
    int i = static_cast<int>(u);
    i = std::clamp(i, 0, n_ - 2);
    const double s = u - i;
    // integral of the Hermite cubic from node i to z
    const double s2 = s * s, s3 = s2 * s, s4 = s2 * s2;
    const double H00 = s - s3 + 0.5 * s4;
    const double H10 = 0.5 * s2 - (2.0 / 3.0) * s3 + 0.25 * s4;
    const double H01 = s3 - 0.5 * s4;
    const double H11 = 0.25 * s4 - s3 / 3.0;
    return cum_[i] + dz_ * (H00 * val_[i] + H01 * val_[i + 1]) +
           dz_ * dz_ * (H10 * dval_[i] + H11 * dval_[i + 1]);
}

double StableDensity::density1(double z) const {
    if (gaussian_) return std::exp(-0.25 * z * z) / (2.0 * std::sqrt(kPi));
    if (std::abs(z) <= x_core_) return core_value(z);
    return tail_series(z);
}

double StableDensity::density(double t, double x) const {
    if (!(t > 0.0)) throw OutOfRange("density: t must be > 0");
    const double s = std::pow(t, -1.0 / p_.a);
    return s * density1(s * x);
}

double StableDensity::derivative1(double z) const {
    if (gaussian_) return -0.5 * z * density1(z);
    if (std::abs(z) <= x_core_) return core_derivative(z);
    return tail_series_derivative(z);
}

double StableDensity::cdf1(double z) const {
    if (gaussian_) return normal_cdf(z / std::numbers::sqrt2);
    if (z < -x_core_) return tail_mass_left(z);
    if (z > x_core_) return 1.0 - tail_mass_right(z);
    return core_cdf(z);
}

double StableDensity::tail_mass_right(double z) const {
    if (gaussian_) return 0.5 * erfc_inhouse(z / 2.0);
    if (z < 0.0) throw OutOfRange("tail_mass_right: z must be >= 0");
    const double wa = std::pow(z, p_.a);
    double s = 0.0, f = 1.0 / wa;
    for (int n = 0; n < kTailTerms; ++n) {
        s += right_coef_[n] * f / ((n + 1) * p_.a);
        f /= wa;
    }
    return std::max(0.0, s);
}

double StableDensity::tail_mass_left(double z) const {
    if (gaussian_) return 0.5 * erfc_inhouse(-z / 2.0);
    if (z > 0.0) throw OutOfRange("tail_mass_left: z must be <= 0");
    const double w = -z;
    const double wa = std::pow(w, p_.a);
    double s = 0.0, f = 1.0 / wa;
    for (int n = 0; n < kTailTerms; ++n) {
        s += left_coef_[n] * f / ((n + 1) * p_.a);
        f /= wa;
    }
    return std::max(0.0, s);
}

double StableDensity::interval_mass(double t, double u0, double u1) const {
    if (!(t > 0.0)) throw OutOfRange("interval_mass: t must be > 0");
    if (u1 < u0) return 0.0;
    const double s = std::pow(t, -1.0 / p_.a);
    return cdf1(s * u1) - cdf1(s * u0);
}

const StableDensity& stable_density(StableParams p) {
    static std::mutex mu;
    static std::map<std::pair<double, double>, std::unique_ptr<StableDensity>> cache;
    std::scoped_lock lock(mu);
    auto& slot = cache[{p.a, p.delta}];
    if (!slot) slot = std::make_unique<StableDensity>(p);
    return *slot;
}

double green_density(StableParams p, double t, double x) {
    return stable_density(p).density(t, x);
}

double DensityTable::trapezoid_mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        s += 0.5 * (values[i] + values[i + 1]) * (xs[i + 1] - xs[i]);
    return s;
}

void DensityTable::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ComputeError("DensityTable::write_csv: cannot open " + path);
    out.precision(17);
    out << "# params a=" << params.a << " delta=" << params.delta << " t=" << t
        << " trunc_error=" << trunc_error << "\n";
    out << "x,value\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << xs[i] << "," << values[i] << "\n";
}

DensityTable green_table(StableParams p, double t, std::span<const double> xs,
                         double tol_mass) {
    if (!(t > 0.0)) throw OutOfRange("green_table: t must be > 0");
    if (xs.size() < 2) throw OutOfRange("green_table: need >= 2 grid nodes");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw OutOfRange("green_table: xs must ascend");

    const StableDensity& sd = stable_density(p);
    DensityTable table;
    table.params = p;
    table.t = t;
    table.xs.assign(xs.begin(), xs.end());
    table.values.resize(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        table.values[i] = sd.density(t, xs[i]);
    table.trunc_error = std::max(0.0, 1.0 - sd.interval_mass(t, xs.front(), xs.back()));

    const double mass = table.trapezoid_mass();
    if (mass < 1.0 - table.trunc_error - tol_mass || mass > 1.0 + tol_mass)
        throw GridTooCoarse("green_table: trapezoid mass misses tolerance");
    return table;
}

double green_convolve(StableParams p, double t, double x,
                      const std::function<double(double)>& f, double s0, double s1) {
    if (!(t > 0.0)) throw OutOfRange("green_convolve: t must be > 0");
    if (!(s1 > s0)) return 0.0;
    const StableDensity& sd = stable_density(p);
    const double scale = std::pow(t, 1.0 / p.a);
    const double reach = scale * sd.core_halfwidth();

    // core part: ∫ G(1,z) f(x - t^{1/a} z) dz over the master grid
    const double dz = sd.grid_step();
    const int n = static_cast<int>(2.0 * sd.core_halfwidth() / dz) + 1;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = -sd.core_halfwidth() + i * dz;
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        const double y = x - scale * z;
        if (y < s0 || y > s1) continue;
        acc += w * sd.density1(z) * f(y);
    }
    double out = acc * dz; // the scale factors of dy = scale dz and G cancel

    // support beyond the core window sits under the heavy tail of G
    auto tail_part = [&](double lo, double hi) {
        if (!(hi > lo)) return;
        const int cells = 64;
        const double h = (hi - lo) / cells;
        double a2 = 0.0;
        for (int i = 0; i <= cells; ++i) {
            const double y = lo + i * h;
            const double w = (i == 0 || i == cells) ? 0.5 : 1.0;
            a2 += w * f(y) * sd.density(t, x - y);
        }
        out += a2 * h;
    };
    tail_part(s0, std::min(s1, x - reach));
    tail_part(std::max(s0, x + reach), s1);
    return out;
}

double j0(const InitialMeasure& mu, StableParams p, double t, double x) {
    if (!(t > 0.0)) throw OutOfRange("j0: t must be > 0");
    const StableDensity& sd = stable_density(p);
    double out = 0.0;
    for (const Atom& atom : mu.atoms())
        out += atom.mass * sd.density(t, x - atom.location);

    if (mu.has_density()) {
        const auto xs = mu.density_xs();
        const auto ys = mu.density_ys();
        const double s0 = xs.front(), s1 = xs.back();

        auto f_poly = [&](double y) -> double {
            if (y < s0 || y > s1) return 0.0;
            const auto it = std::upper_bound(xs.begin(), xs.end(), y);
            std::size_t i = static_cast<std::size_t>(it - xs.begin());
            i = std::clamp<std::size_t>(i, 1, xs.size() - 1) - 1;
            const double w = (y - xs[i]) / (xs[i + 1] - xs[i]);
            return ys[i] + w * (ys[i + 1] - ys[i]);
        };
        out += green_convolve(p, t, x, f_poly, s0, s1);

        // constant tail via mass conservation, no truncation bias
        if (mu.tail() == TailKind::constant && mu.tail_c() > 0.0)
            out += mu.tail_c() * (1.0 - sd.interval_mass(t, x - s1, x - s0));
    }
    return out;
}

double lambda_const(StableParams p) {
    return stable_density(p).sup_value();
}

double gamma_const(StableParams p) {
    if (p.delta == 0.0) return 0.25; // symmetric halves
    const double f0 = stable_density(p).cdf1(0.0);
    return std::min(f0, 1.0 - f0) / 2.0;
}

double beta_integral(double a, double b) {
    if (!(a > 0.0)) throw OutOfRange("beta_integral: a must be > 0");
    if (!(b > -1.0) || !(b < a + 1.0))
        throw OutOfRange("beta_integral: b must lie in ]-1, a+1[");
    return 1.0 / (b + 1.0) * std::tgamma((a - b + 1.0) / (a + 2.0)) *
           std::tgamma((a + b + 3.0) / (a + 2.0));
}

} // namespace fracheat
