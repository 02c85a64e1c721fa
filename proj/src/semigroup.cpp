#include "fracheat/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fracheat/errors.hpp"
#include "fracheat/numerics.hpp"

namespace fracheat {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kSpectrumN = 1u << 16;

int default_n_cut(double z) {
    return static_cast<int>(std::ceil(z + 12.0 * std::sqrt(z) + 30.0));
}

// log of the Poisson(z) weight for count n
double log_pois(double z, int n) {
    return n * std::log(z) - z - std::lgamma(n + 1.0);
}

} // namespace

double ApproxKernel::value_at(double x) const {
    if (xs.size() < 2 || x < xs.front() || x > xs.back()) return 0.0;
    const double dx = xs[1] - xs[0];
    const double u = (x - xs.front()) / dx;
    const int i = std::clamp(static_cast<int>(u), 0, static_cast<int>(xs.size()) - 2);
    const double s = u - i;
    return (1.0 - s) * r_values[i] + s * r_values[i + 1];
}

double ApproxKernel::mass() const {
    if (xs.size() < 2) return 0.0;
    return trapezoid_mass(r_values, xs[1] - xs[0]) + tail_remainder;
}

double ApproxKernel::l2_mass() const {
    if (xs.size() < 2) return 0.0;
    std::vector<double> sq(r_values.size());
    for (std::size_t i = 0; i < sq.size(); ++i) sq[i] = r_values[i] * r_values[i];
    return trapezoid_mass(sq, xs[1] - xs[0]);
}

double r_kernel(StableParams params, double eps, double t, double x, int n_cut) {
    if (!(eps > 0.0)) throw OutOfRange("r_kernel: eps must be > 0");
    if (!(t > 0.0)) throw OutOfRange("r_kernel: t must be > 0");
    const double z = t / eps;
    if (n_cut < 0) n_cut = default_n_cut(z);

    const StableDensity& sd = stable_density(params);
    double covered = std::exp(-z); // the n = 0 weight
    double out = 0.0;
    for (int n = 1; n <= n_cut; ++n) {
        const double lw = log_pois(z, n);
        const double w = std::exp(lw);
        covered += w;
        if (lw > -50.0) out += w * sd.density(n * eps, x);
    }
    if (1.0 - covered > 1e-12)
        throw TruncationTooTight("r_kernel: Poisson tail beyond n_cut exceeds 1e-12");
    return out;
}

ApproxKernel make_approx_kernel(StableParams params, double eps, double t) {
    if (!(eps > 0.0)) throw OutOfRange("make_approx_kernel: eps must be > 0");
    if (!(t >= 0.0)) throw OutOfRange("make_approx_kernel: t must be >= 0");
    const double a = params.a;
    const double z = t / eps;

    ApproxKernel out;
    out.eps = eps;
    out.params = params;
    out.t = t;
    out.atom_weight = std::exp(-z);
    if (t == 0.0) { // pure atom, empty density
        out.xs = {-1.0, 1.0};
        out.r_values = {0.0, 0.0};
        return out;
    }

    const double scale = std::pow(t + 6.0 * eps, 1.0 / a);
    const double dx = scale / 128.0;
    const std::size_t N = kSpectrumN;
    const double period = N * dx;
    const double dxi = 2.0 * kPi / period;
    const double cth = std::cos(params.delta * kPi / 2.0);
    const double sth = std::sin(params.delta * kPi / 2.0);

    // spectrum exp(z (e^{eps psi(xi)} - 1)) - e^{-z}
    std::vector<std::complex<double>> spec(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double xi = (k <= N / 2 ? static_cast<double>(k)
                                      : static_cast<double>(k) - static_cast<double>(N)) *
                          dxi;
        const double mag = std::pow(std::abs(xi), a);
        const std::complex<double> psi(-mag * cth, xi >= 0.0 ? mag * sth : -mag * sth);
        std::complex<double> ew(0.0, 0.0);
        if (eps * psi.real() > -745.0) ew = std::exp(eps * psi);
        const std::complex<double> arg = z * (ew - 1.0);
        std::complex<double> val(0.0, 0.0);
        if (arg.real() > -745.0) val = std::exp(arg);
        val -= out.atom_weight;
        spec[k] = val;
    }
    fft_pow2(spec, +1);

    const int n_core = std::min(2 * 64 * 128 + 1, static_cast<int>(N) - 1);
    const int ihalf = (n_core - 1) / 2; // 64 scale units each side
    out.xs.resize(n_core);
    out.r_values.resize(n_core);

    // wrapped tails: R~ behaves like sum_j T_j |x|^{-1-ja} with the Poisson
    // moments of (N eps)^j as time factors
    const double e1 = eps, t2 = t * t, t3 = t2 * t;
    double Tr[3], Tl[3];
    {
        const double m1 = t;
        const double m2 = t2 + t * e1;
        const double m3 = t3 + 3.0 * t2 * e1 + t * e1 * e1;
        // density1 tail: G(1,w) ~ c_j |w|^{-1-ja}  =>  G(s,x) ~ c_j s^j |x|^{-1-ja}
        for (int j = 1; j <= 3; ++j) {
            const double common = ((j % 2 == 1) ? 1.0 : -1.0) /
                                  (kPi * std::tgamma(j + 1.0)) * std::tgamma(1.0 + j * a);
            const double cr = common * std::sin(j * kPi * (a - params.delta) / 2.0);
            const double cl = common * std::sin(j * kPi * (a + params.delta) / 2.0);
            const double mj = (j == 1) ? m1 : (j == 2 ? m2 : m3);
            Tr[j - 1] = (params.a == 2.0) ? 0.0 : cr * mj;
            Tl[j - 1] = (params.a == 2.0) ? 0.0 : cl * mj;
        }
    }
    auto tail_val = [&](double x) {
        const double w = std::abs(x);
        const double* T = x >= 0.0 ? Tr : Tl;
        const double wa = std::pow(w, a);
        double s = 0.0, f = 1.0 / (w * wa);
        for (int j = 0; j < 3; ++j) {
            s += T[j] * f;
            f /= wa;
        }
        return s;
    };

    const double inv = 1.0 / (static_cast<double>(N) * dx);
    for (int i = 0; i < n_core; ++i) {
        const int j = i - ihalf;
        const std::size_t idx = j >= 0 ? static_cast<std::size_t>(j)
                                       : N + static_cast<std::size_t>(j);
        const double x = j * dx;
        double v = spec[idx].real() * inv;
        for (int m = 1; m <= 16; ++m)
            v -= tail_val(x + m * period) + tail_val(x - m * period);
        const double mfar = 16.5 * period;
        v -= (Tr[0] * std::pow(mfar + x, -a) + Tl[0] * std::pow(mfar - x, -a)) /
             (a * period);
        out.xs[i] = x;
        out.r_values[i] = std::max(0.0, v);
    }

    // analytic mass beyond the grid
    const double X = out.xs.back();
    double rem = 0.0;
    const double Xa = std::pow(X, a);
    double f = 1.0 / Xa;
    for (int j = 0; j < 3; ++j) {
        rem += (std::max(0.0, Tr[j]) + std::max(0.0, Tl[j])) * f / ((j + 1) * a);
        f /= Xa;
    }
    out.tail_remainder = rem;
    return out;
}

std::vector<double> g_eps_apply(std::span<const double> f, StableParams params,
                                double eps, double t, double dx) {
    if (!(eps > 0.0)) throw OutOfRange("g_eps_apply: eps must be > 0");
    if (!(t >= 0.0)) throw OutOfRange("g_eps_apply: t must be >= 0");
    if (!(dx > 0.0)) throw OutOfRange("g_eps_apply: dx must be > 0");
    const int n = static_cast<int>(f.size());
    std::vector<double> out(f.begin(), f.end());
    if (t == 0.0) return out;

    const ApproxKernel rk = make_approx_kernel(params, eps, t);
    std::vector<double> row(2 * n - 1);
    for (int d = 0; d < 2 * n - 1; ++d) row[d] = rk.value_at((d - (n - 1)) * dx);

    std::vector<double> fw(f.begin(), f.end());
    fw.front() *= 0.5;
    fw.back() *= 0.5;
    const auto conv = convolve(fw, row, dx);
    const double atom = rk.atom_weight;
    for (int i = 0; i < n; ++i) out[i] = atom * f[i] + conv[i + n - 1];
    return out;
}

double approx_series_f(double b, double z) {
    if (!(z >= 0.0)) throw OutOfRange("approx_series_f: z must be >= 0");
    if (z == 0.0) {
        if (b == -1.0) return 1.0;
        if (b > -1.0) return 0.0;
        throw OutOfRange("approx_series_f: diverges at z = 0 for b < -1");
    }
    // f_b(z) = sum_k exp((k+b) ln z - z - lgamma(k+1) - b ln k)
    const double lz = std::log(z);
    const int kmax = static_cast<int>(std::ceil(z + 40.0 * std::sqrt(z))) + 60;
    double sum = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        const double le = (k + b) * lz - z - std::lgamma(k + 1.0) - b * std::log(k);
        const double term = std::exp(le);
        sum += term;
        if (k > z && term < 1e-16 * sum) break;
    }
    return sum;
}

double c_b_sup(double b) {
    if (!(b >= -1.0)) throw OutOfRange("c_b_sup: b must be >= -1");
    double best = approx_series_f(b, 0.0);
    double best_z = 0.0;
    for (int i = 0; i <= 400; ++i) {
        const double z = std::pow(10.0, -4.0 + 7.5 * i / 400.0); // 1e-4 .. ~3e3
        const double v = approx_series_f(b, z);
        if (v > best) { best = v; best_z = z; }
    }
    if (best_z > 0.0) {
        const double lo = best_z / 1.6, hi = best_z * 1.6;
        const double zr = golden_max([&](double z) { return approx_series_f(b, z); },
                                     lo, hi, 1e-10 * best_z + 1e-14);
        best = std::max(best, approx_series_f(b, zr));
    }
    return best;
}

double l1_bound_constant(StableParams params) {
    const double a = params.a;
    const double k1 = stable_density(params).k1_fitted();
    const double beta_part = std::tgamma(a / (a + 2.0)) * std::tgamma((a + 4.0) / (a + 2.0));
    // sup of e^{-z} z (4z^2+7z+1) sum z^{k-1}/(k! k^2), expressed through f_2
    auto q = [](double z) {
        if (z <= 0.0) return 0.0;
        return approx_series_f(2.0, z) * (4.0 + 7.0 / z + 1.0 / (z * z));
    };
    double sup_q = 4.0; // the z -> infinity limit
    double best_z = 0.0;
    for (int i = 0; i <= 300; ++i) {
        const double z = std::pow(10.0, -2.0 + 5.0 * i / 300.0);
        const double v = q(z);
        if (v > sup_q) { sup_q = v; best_z = z; }
    }
    if (best_z > 0.0) {
        const double zr = golden_max(q, best_z / 1.6, best_z * 1.6, 1e-9 * best_z);
        sup_q = std::max(sup_q, q(zr));
    }
    return (1.0 + k1 * beta_part) / a * std::sqrt(sup_q);
}

L1Error l1_error(StableParams params, double eps, double t) {
    if (!(eps > 0.0) || !(t > 0.0)) throw OutOfRange("l1_error: need eps > 0, t > 0");
    const StableDensity& sd = stable_density(params);
    const ApproxKernel rk = make_approx_kernel(params, eps, t);

    const double dx = rk.xs[1] - rk.xs[0];
    std::vector<double> diff(rk.xs.size());
    for (std::size_t i = 0; i < rk.xs.size(); ++i)
        diff[i] = std::abs(rk.r_values[i] - sd.density(t, rk.xs[i]));
    double numeric = trapezoid_mass(diff, dx);

    // tails: the leading x^{-1-a} coefficients of R~ and G cancel exactly,
    // leaving the Poisson-variance correction at order x^{-1-2a}
    if (params.a < 2.0) {
        const double a = params.a;
        const double X = rk.xs.back();
        for (int j = 2; j <= 3; ++j) {
            const double common = ((j % 2 == 1) ? 1.0 : -1.0) /
                                  (kPi * std::tgamma(j + 1.0)) * std::tgamma(1.0 + j * a);
            const double cr = common * std::sin(j * kPi * (a - params.delta) / 2.0);
            const double cl = common * std::sin(j * kPi * (a + params.delta) / 2.0);
            const double gap = (j == 2) ? t * eps : 3.0 * t * t * eps + t * eps * eps;
            numeric += (std::abs(cr) + std::abs(cl)) * gap * std::pow(X, -j * a) / (j * a);
        }
    }

    L1Error out;
    out.numeric = numeric;
    out.bound = std::exp(-t / eps) + l1_bound_constant(params) * std::sqrt(eps / t);
    return out;
}

double r_l2_mass(StableParams params, double eps, double t) {
    return make_approx_kernel(params, eps, t).l2_mass();
}

double g_l2_mass(StableParams params, double t) {
    if (!(t > 0.0)) throw OutOfRange("g_l2_mass: t must be > 0");
    const double a = params.a;
    const double cth = std::cos(params.delta * kPi / 2.0);
    return std::tgamma(1.0 + 1.0 / a) / kPi * std::pow(2.0 * t * cth, -1.0 / a);
}

double g_l2_time_integral(StableParams params, double T) {
    if (!(T > 0.0)) throw OutOfRange("g_l2_time_integral: T must be > 0");
    const double a = params.a;
    return g_l2_mass(params, 1.0) * a / (a - 1.0) * std::pow(T, 1.0 - 1.0 / a);
}

L2Profile l2_error_profile(StableParams params, double eps, double T) {
    if (!(eps > 0.0) || !(T > 0.0)) throw OutOfRange("l2_error_profile: need eps, T > 0");
    const StableDensity& sd = stable_density(params);
    const int n_s = 64;
    const double h = T / n_s;
    const double a = params.a;
    const double beta = -1.0 / a; // integrand ~ s^{-1/a} near s = 0

    double total = 0.0;
    for (int k = 0; k < n_s; ++k) {
        const double s = (k + 0.5) * h;
        const double wk = (std::pow(k + 1.0, 1.0 + beta) - std::pow(k, 1.0 + beta)) /
                          ((1.0 + beta) * std::pow(k + 0.5, beta));
        const ApproxKernel rk = make_approx_kernel(params, eps, s);
        const double dx = rk.xs[1] - rk.xs[0];
        std::vector<double> sq(rk.xs.size());
        for (std::size_t i = 0; i < rk.xs.size(); ++i) {
            const double d = rk.r_values[i] - sd.density(s, rk.xs[i]);
            sq[i] = d * d;
        }
        total += wk * h * trapezoid_mass(sq, dx);
    }

    L2Profile out;
    out.integral = total;
    out.r_l2_at_horizon = r_l2_mass(params, eps, T);
    return out;
}

double psi_cutoff(double eps, double x) {
    if (!(eps > 0.0)) throw OutOfRange("psi_cutoff: eps must be > 0");
    const double w = std::abs(x);
    if (w <= 1.0 / eps) return 1.0;
    if (w >= 1.0 + 1.0 / eps) return 0.0;
    return 1.0 + 1.0 / eps - w;
}

InitialMeasure smooth_initial(const InitialMeasure& mu, StableParams params, double eps) {
    if (!(eps > 0.0)) throw OutOfRange("smooth_initial: eps must be > 0");
    const double cutoff = 1.0 + 1.0 / eps;

    // effective extent of the cut measure
    double lo = cutoff, hi = -cutoff;
    for (const Atom& atm : mu.atoms()) {
        lo = std::min(lo, atm.location);
        hi = std::max(hi, atm.location);
    }
    if (mu.has_density()) {
        if (mu.tail() == TailKind::constant && mu.tail_c() > 0.0) {
            lo = -cutoff;
            hi = cutoff;
        } else {
            lo = std::min(lo, mu.density_xs().front());
            hi = std::max(hi, mu.density_xs().back());
        }
    }
    lo = std::max(lo, -cutoff);
    hi = std::min(hi, cutoff);
    if (!(hi >= lo)) { lo = -1.0; hi = 1.0; }

    const double spread = 64.0 * std::pow(eps, 1.0 / params.a);
    const double out_lo = lo - spread, out_hi = hi + spread;
    double step = std::pow(eps, 1.0 / params.a) / 8.0;
    const int max_nodes = 20001;
    int n = static_cast<int>((out_hi - out_lo) / step) + 2;
    if (n > max_nodes) {
        n = max_nodes;
        step = (out_hi - out_lo) / (n - 1);
    }

    auto f_cut = [&](double y) { return psi_cutoff(eps, y) * mu.density_at(y); };

    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        const double x = out_lo + i * step;
        double v = 0.0;
        for (const Atom& atm : mu.atoms())
            v += atm.mass * psi_cutoff(eps, atm.location) *
                 green_density(params, eps, x - atm.location);
        if (mu.has_density()) v += green_convolve(params, eps, x, f_cut, lo, hi);
        xs[i] = x;
        ys[i] = std::max(0.0, v);
    }
    return InitialMeasure::with_density(std::move(xs), std::move(ys));
}

} // namespace fracheat
