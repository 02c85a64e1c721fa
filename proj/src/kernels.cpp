#include "fracheat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <numbers>

#include "fracheat/errors.hpp"
#include "fracheat/numerics.hpp"
#include "fracheat/special.hpp"

#include "json.hpp"

namespace fracheat {

namespace {

constexpr double kPi = std::numbers::pi;

// 8-point Gauss-Legendre on [-1,1]
constexpr double kGx[8] = {-0.9602898564975362, -0.7966664774136267,
                           -0.5255324099163290, -0.1834346424956498,
                           0.1834346424956498,  0.5255324099163290,
                           0.7966664774136267,  0.9602898564975362};
constexpr double kGw[8] = {0.1012285362903763, 0.2223810344533745,
                           0.3137066458778873, 0.3626837833783620,
                           0.3626837833783620, 0.3137066458778873,
                           0.2223810344533745, 0.1012285362903763};

} // namespace

RhoSpec RhoSpec::zero() {
    RhoSpec r;
    r.kind = Kind::linear;
    r.linear_lambda = 0.0;
    r.lip = 0.0;
    r.growth_lip = 0.0;
    r.theta = 0.0;
    return r;
}

RhoSpec RhoSpec::linear(double lambda) {
    RhoSpec r;
    r.kind = Kind::linear;
    r.linear_lambda = lambda;
    r.lip = std::abs(lambda);
    r.growth_lip = std::abs(lambda);
    r.theta = 0.0;
    r.rho_zero = 0.0;
    return r;
}

RhoSpec RhoSpec::custom(std::function<double(double)> fn, double lip,
                        double growth_lip, double theta) {
    if (!(lip > 0.0) || !(growth_lip > 0.0) || !(theta >= 0.0))
        throw OutOfRange("RhoSpec::custom: need lip > 0, growth_lip > 0, theta >= 0");
    RhoSpec r;
    r.kind = Kind::custom;
    r.fn = std::move(fn);
    r.lip = lip;
    r.growth_lip = growth_lip;
    r.theta = theta;
    r.rho_zero = r.fn(0.0);
    return r;
}

std::vector<double> KernelGrid::midpoint_times() const {
    std::vector<double> ts(n_t);
    for (int k = 0; k < n_t; ++k) ts[k] = (k + 0.5) * dt();
    return ts;
}

std::vector<double> KernelGrid::space_nodes() const {
    std::vector<double> xs(n_x + 1);
    for (int j = 0; j <= n_x; ++j) xs[j] = -half_width + j * dx();
    return xs;
}

double KernelTable::value_at(double t, double x) const {
    if (ts.empty() || xs.empty()) return 0.0;
    if (x < xs.front() || x > xs.back()) return 0.0; // truncated support
    const double dt = ts.size() > 1 ? ts[1] - ts[0] : 1.0;
    const double dx = xs.size() > 1 ? xs[1] - xs[0] : 1.0;
    double ut = (t - ts.front()) / dt;
    double ux = (x - xs.front()) / dx;
    const int it = std::clamp(static_cast<int>(ut), 0, static_cast<int>(ts.size()) - 2);
    const int ix = std::clamp(static_cast<int>(ux), 0, static_cast<int>(xs.size()) - 2);
    const double st = std::clamp(ut - it, 0.0, 1.0);
    const double sx = std::clamp(ux - ix, 0.0, 1.0);
    return (1 - st) * ((1 - sx) * at(it, ix) + sx * at(it, ix + 1)) +
           st * ((1 - sx) * at(it + 1, ix) + sx * at(it + 1, ix + 1));
}

double KernelTable::max_value() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, v);
    return m;
}

void KernelTable::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ComputeError("KernelTable::write_csv: cannot open " + path);
    out.precision(17);
    out << "t,x,value\n";
    for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j)
            out << ts[i] << "," << xs[j] << "," << values[i * xs.size() + j] << "\n";
}

void KernelTable::write_sidecar_json(const std::string& path) const {
    nlohmann::json j;
    j["lambda"] = lambda;
    j["params"] = {{"a", params.a}, {"delta", params.delta}};
    j["n_terms"] = n_terms;
    j["series_tail_bound"] = series_tail_bound;
    j["fitted_c"] = fitted_c;
    std::ofstream out(path);
    if (!out) throw ComputeError("KernelTable::write_sidecar_json: cannot open " + path);
    out << j.dump(2) << "\n";
}

namespace {

// Shared machinery for the layer recursion: cell-averaged kernels of
// L0 = lambda^2 G^2 on the doubled offset grid, FFT-ready.
class LayerConvolver {
public:
    LayerConvolver(double lambda, StableParams params, const KernelGrid& grid)
        : lambda_(lambda), params_(params), grid_(grid),
          sd_(stable_density(params)) {
        if (!(params.a > 1.0)) throw SingularityBlowup("LayerConvolver: need a > 1");
        const int n_off = 2 * grid.n_x + 1; // offsets -n_x..n_x
        const int out_len = (grid.n_x + 1) + n_off - 1;
        pad_ = 1;
        while (pad_ < static_cast<std::size_t>(out_len)) pad_ <<= 1;

        const double h = grid.dt();
        const double dx = grid.dx();

        // cell-averaged L0 over each time cell, tabulated on offsets and
        // stored as padded FFTs
        bhat_.resize(grid.n_t + 1);
        for (int i = 1; i <= grid.n_t; ++i) {
            std::vector<std::complex<double>> row(pad_, 0.0);
            const double lo = (i - 0.5) * h, hi = (i + 0.5) * h;
            for (int d = 0; d < n_off; ++d) {
                const double x = (d - grid.n_x) * dx;
                double acc = 0.0;
                for (int q = 0; q < 8; ++q) {
                    const double u = 0.5 * (lo + hi) + 0.5 * (hi - lo) * kGx[q];
                    const double g = sd_.density(u, x);
                    acc += kGw[q] * g * g;
                }
                row[d] = lambda_ * lambda_ * acc * 0.5; // cell average (x h/h)
            }
            fft_pow2(row, -1);
            bhat_[i] = std::move(row);
        }

        // mass-action weight of the unresolved [0, h/2] sliver:
        // L0(u,.) acts like a point mass of lambda^2 G(2u,0)
        const double a = params_.a;
        c_half_ = lambda_ * lambda_ * sd_.density1(0.0) * std::pow(2.0, -1.0 / a) *
                  std::pow(0.5 * h, 1.0 - 1.0 / a) * a / (a - 1.0);
    }

    // analytic layer 0 on the ladder
    std::vector<std::vector<double>> layer0() const {
        std::vector<std::vector<double>> rows(grid_.n_t);
        const auto ts = grid_.midpoint_times();
        const auto xs = grid_.space_nodes();
        for (int k = 0; k < grid_.n_t; ++k) {
            rows[k].resize(xs.size());
            for (std::size_t j = 0; j < xs.size(); ++j) {
                const double g = sd_.density(ts[k], xs[j]);
                rows[k][j] = lambda_ * lambda_ * g * g;
            }
        }
        return rows;
    }

    // one convolution step: next[m] = h sum_k w_k prev[k] (*) Bbar[m-k] + half cell.
    // source_layer is the layer index of prev; its space-integrated mass behaves
    // like s^beta near s = 0, and the cell weights w_k integrate that power
    // exactly instead of sampling it at the midpoint.
    std::vector<std::vector<double>> next(const std::vector<std::vector<double>>& prev,
                                          int source_layer) const {
        const int n_t = grid_.n_t;
        const int n_nodes = grid_.n_x + 1;
        const double h = grid_.dt();
        const double dx = grid_.dx();
        const double a = params_.a;
        const double beta = source_layer * (1.0 - 1.0 / a) - 1.0 / a;

        // FFTs of the source rows with trapezoid end weights and product-
        // integration cell weights
        std::vector<std::vector<std::complex<double>>> ahat(n_t);
        parallel_for(n_t, [&](int k) {
            const double wk = (std::pow(k + 1.0, 1.0 + beta) - std::pow(k, 1.0 + beta)) /
                              ((1.0 + beta) * std::pow(k + 0.5, beta));
            std::vector<std::complex<double>> row(pad_, 0.0);
            for (int j = 0; j < n_nodes; ++j) row[j] = wk * prev[k][j];
            row[0] *= 0.5;
            row[n_nodes - 1] *= 0.5;
            fft_pow2(row, -1);
            ahat[k] = std::move(row);
        });

        std::vector<std::vector<double>> out(n_t);
        parallel_for(n_t, [&](int m) {
            std::vector<std::complex<double>> acc(pad_, 0.0);
            for (int k = 0; k < m; ++k) {
                const auto& A = ahat[k];
                const auto& B = bhat_[m - k];
                for (std::size_t q = 0; q < pad_; ++q) acc[q] += A[q] * B[q];
            }
            fft_pow2(acc, +1);
            out[m].resize(n_nodes);
            const double scale = h * dx / static_cast<double>(pad_);
            const int src = m == 0 ? 0 : m - 1; // frozen row for the sliver
            for (int j = 0; j < n_nodes; ++j) {
                const double conv = acc[j + grid_.n_x].real() * scale;
                out[m][j] = std::max(0.0, conv + c_half_ * prev[src][j]);
            }
        });
        return out;
    }

    double half_weight() const { return c_half_; }

private:
    double lambda_;
    StableParams params_;
    KernelGrid grid_;
    const StableDensity& sd_;
    std::size_t pad_ = 1;
    std::vector<std::vector<std::complex<double>>> bhat_;
    double c_half_ = 0.0;
};

KernelTable make_table(double lambda, StableParams params, const KernelGrid& grid) {
    KernelTable t;
    t.lambda = lambda;
    t.params = params;
    t.ts = grid.midpoint_times();
    t.xs = grid.space_nodes();
    t.values.assign(t.ts.size() * t.xs.size(), 0.0);
    return t;
}

void store_rows(KernelTable& table, const std::vector<std::vector<double>>& rows) {
    for (std::size_t k = 0; k < rows.size(); ++k)
        for (std::size_t j = 0; j < rows[k].size(); ++j)
            table.values[k * table.xs.size() + j] = rows[k][j];
}

double rows_max(const std::vector<std::vector<double>>& rows) {
    double m = 0.0;
    for (const auto& r : rows)
        for (double v : r) m = std::max(m, v);
    return m;
}

} // namespace

KernelTable ln_kernel(int n, double lambda, StableParams params, const KernelGrid& grid) {
    if (n < 0) throw OutOfRange("ln_kernel: n must be >= 0");
    KernelTable table = make_table(lambda, params, grid);
    table.n_terms = 1;
    if (lambda == 0.0) return table;

    LayerConvolver conv(lambda, params, grid);
    auto rows = conv.layer0();
    for (int level = 0; level < n; ++level) rows = conv.next(rows, level);
    store_rows(table, rows);
    return table;
}

KernelTable k_kernel(double lambda, StableParams params, const KernelGrid& grid,
                     double tol, int max_terms) {
    if (!(tol > 0.0)) throw OutOfRange("k_kernel: tol must be > 0");
    KernelTable table = make_table(lambda, params, grid);
    table.n_terms = 1;
    if (lambda == 0.0) return table;

    LayerConvolver conv(lambda, params, grid);
    auto rows = conv.layer0();
    store_rows(table, rows);
    double running_max = table.max_value();
    double prev_layer_max = running_max;

    for (int n = 1; n <= max_terms; ++n) {
        rows = conv.next(rows, n - 1);
        const double layer_max = rows_max(rows);
        for (std::size_t k = 0; k < rows.size(); ++k)
            for (std::size_t j = 0; j < rows[k].size(); ++j)
                table.values[k * table.xs.size() + j] += rows[k][j];
        table.n_terms = n + 1;
        running_max = std::max(running_max, table.max_value());
        if (layer_max < tol * running_max) {
            const double r = std::min(0.9, layer_max / std::max(prev_layer_max, 1e-300));
            table.series_tail_bound = layer_max * r / (1.0 - r);
            table.fitted_c = fit_upper_bound_c(table);
            return table;
        }
        prev_layer_max = layer_max;
    }
    throw NoConvergence("k_kernel: series did not reach the stop rule");
}

double k_heat_closed(double nu, double lambda, double t, double x) {
    if (!(nu > 0.0)) throw OutOfRange("k_heat_closed: nu must be > 0");
    if (!(t > 0.0)) throw OutOfRange("k_heat_closed: t must be > 0");
    const double g_half = std::exp(-x * x / (nu * t)) / std::sqrt(kPi * nu * t);
    const double term1 = lambda * lambda / std::sqrt(4.0 * kPi * nu * t);
    const double l4 = lambda * lambda * lambda * lambda;
    const double term2 = l4 / (2.0 * nu) * std::exp(l4 * t / (4.0 * nu)) *
                         normal_cdf(lambda * lambda * std::sqrt(t / (2.0 * nu)));
    return g_half * (term1 + term2);
}

double k_wave_closed(double kappa, double lambda, double t, double x) {
    if (!(kappa > 0.0)) throw OutOfRange("k_wave_closed: kappa must be > 0");
    if (std::abs(x) > kappa * t) return 0.0;
    const double arg = std::sqrt(lambda * lambda * (kappa * t * kappa * t - x * x) /
                                 (2.0 * kappa));
    return lambda * lambda / 4.0 * bessel_i0(arg);
}

double k_bound_gamma(StableParams params, double lambda) {
    return lambda * lambda * lambda_const(params) * std::tgamma(1.0 - 1.0 / params.a);
}

double k_upper_bound(StableParams params, double lambda, double t, double x, double C) {
    if (!(t > 0.0)) throw OutOfRange("k_upper_bound: t must be > 0");
    const double a = params.a;
    const double astar = a / (a - 1.0);
    const double gamma = k_bound_gamma(params, lambda);
    const double t1a = std::pow(t, 1.0 / a);
    return C / t1a * green_density(params, t, x) *
           (1.0 + t1a * std::exp(std::pow(gamma, astar) * t));
}

double fit_upper_bound_c(const KernelTable& table) {
    // even time indices are the calibration half; 5% headroom
    const double tiny = 1e-12 * std::max(table.max_value(), 1e-300);
    double max_ratio = 0.0;
    for (std::size_t i = 0; i < table.ts.size(); i += 2) {
        for (std::size_t j = 0; j < table.xs.size(); ++j) {
            const double k = table.values[i * table.xs.size() + j];
            if (k <= tiny) continue;
            const double shape =
                k_upper_bound(table.params, table.lambda, table.ts[i], table.xs[j], 1.0);
            if (shape > 0.0) max_ratio = std::max(max_ratio, k / shape);
        }
    }
    return 1.05 * max_ratio;
}

double moment_upper_bound(int p, const InitialMeasure& mu, const RhoSpec& rho,
                          StableParams params, const KernelGrid& grid, double t,
                          double x, double k_tol) {
    if (p < 2 || p % 2 != 0) throw OutOfRange("moment_upper_bound: p must be even >= 2");
    if (!(t > 0.0)) throw OutOfRange("moment_upper_bound: t must be > 0");
    const double h = grid.dt();
    const int m_steps = static_cast<int>(std::llround(t / h));
    if (std::abs(m_steps * h - t) > 1e-9 * std::max(1.0, t) || m_steps < 1 ||
        m_steps > grid.n_t)
        throw OutOfRange("moment_upper_bound: t must sit on the integer time grid");

    const double lam_eff = (p == 2) ? rho.growth_lip : 4.0 * std::sqrt(p) * rho.growth_lip;
    const double cp = (p == 2) ? 1.0 : 2.0;
    const double theta2 = rho.theta * rho.theta;

    const double j0_tx = j0(mu, params, t, x);
    if (lam_eff == 0.0) return cp * j0_tx * j0_tx;

    KernelTable K = k_kernel(lam_eff, params, grid, k_tol);
    const auto ts = grid.midpoint_times();
    const auto xs = grid.space_nodes();
    const double dx = grid.dx();

    double conv = 0.0;
    for (int k = 0; k < m_steps; ++k) {
        // f at source midpoint tau_k against K at tau_{m-1-k}
        const int ik = m_steps - 1 - k;
        double row = 0.0;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double jj = j0(mu, params, ts[k], xs[j]);
            const double f = theta2 + cp * jj * jj;
            const double w = (j == 0 || j == xs.size() - 1) ? 0.5 : 1.0;
            row += w * f * K.value_at(ts[ik], x - xs[j]);
        }
        conv += h * dx * row;
    }
    // unresolved final sliver, kernel acting as its mass
    {
        const double a = params.a;
        const double c_half = lam_eff * lam_eff * stable_density(params).density1(0.0) *
                              std::pow(2.0, -1.0 / a) * std::pow(0.5 * h, 1.0 - 1.0 / a) *
                              a / (a - 1.0);
        const double jj = j0(mu, params, ts[m_steps - 1], x);
        conv += c_half * (theta2 + cp * jj * jj);
    }
    return cp * j0_tx * j0_tx + conv;
}

double moment_growth_bound(StableParams params, double p, double t, double Q) {
    if (!(Q > 0.0)) throw OutOfRange("moment_growth_bound: Q must be > 0");
    if (!(p >= 2.0)) throw OutOfRange("moment_growth_bound: p must be >= 2");
    const double a = params.a;
    return std::pow(Q, p) * std::exp(Q * std::pow(p, (2.0 * a - 1.0) / (a - 1.0)) * t);
}

} // namespace fracheat
