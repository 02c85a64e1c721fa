#include "fracheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "fracheat/errors.hpp"
#include "fracheat/numerics.hpp"
#include "fracheat/rng.hpp"
#include "fracheat/semigroup.hpp"

namespace fracheat {

void SpaceTimeGrid::validate(double a) const {
    if (!(horizon > 0.0) || !(half_width > 0.0) || n_t < 1 || n_x < 2)
        throw OutOfRange("SpaceTimeGrid: need positive extents and cells");
    if (!allow_coarse_dt && dt() > std::pow(dx(), a) + 1e-15)
        throw OutOfRange("SpaceTimeGrid: dt > dx^a; set allow_coarse_dt to override");
}

double NoiseLattice::increment(uint32_t n, uint32_t j) const {
    return gaussian_at(seed, replicate, n, j) * std::sqrt(grid.dt() * grid.dx());
}

NoiseLattice NoiseLattice::with_replicate(uint32_t r) const {
    NoiseLattice out = *this;
    out.replicate = r;
    return out;
}

NoiseLattice make_noise(const SpaceTimeGrid& grid, uint64_t seed) {
    return NoiseLattice{grid, seed, 0};
}

double FieldPath::at_time_x(double t, double x) const {
    const int r = std::clamp(static_cast<int>(std::llround((t - warm_start_t) / grid.dt())),
                             0, rows() - 1);
    const int j = std::clamp(static_cast<int>(std::llround((x + grid.half_width) / grid.dx() - 0.5)),
                             0, grid.n_x - 1);
    return row(r)[j];
}

void FieldPath::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ComputeError("FieldPath::write_csv: cannot open " + path);
    out.precision(17);
    out << "n,j,t,x,u\n";
    for (int r = 0; r < rows(); ++r)
        for (int j = 0; j < grid.n_x; ++j)
            out << r << "," << j << "," << time(r) << "," << grid.x_center(j) << ","
                << row(r)[j] << "\n";
}

SolverWorkspace::SolverWorkspace(StableParams params, InitialMeasure measure,
                                 const SpaceTimeGrid& grid)
    : params_(params), measure_(std::move(measure)), grid_(grid) {
    grid.validate(params.a);

    const int n_x = grid.n_x;
    const double dt = grid.dt(), dx = grid.dx();

    // homogeneous solution on every represented row
    j0_rows_.resize(static_cast<std::size_t>(grid.n_t) * n_x);
    if (measure_.is_zero()) {
        std::fill(j0_rows_.begin(), j0_rows_.end(), 0.0);
    } else {
        parallel_for(grid.n_t, [&](int r) {
            for (int j = 0; j < n_x; ++j)
                j0_rows_[static_cast<std::size_t>(r) * n_x + j] =
                    j0(measure_, params_, (r + 1) * dt, grid.x_center(j));
        });
    }

    // padded FFT of the one-step kernel row G(dt, d dx), d = -(n_x-1)..(n_x-1)
    const int row_len = 2 * n_x - 1;
    pad_ = 1;
    while (pad_ < static_cast<std::size_t>(row_len + n_x - 1)) pad_ <<= 1;
    kernel_fft_.assign(pad_, 0.0);
    for (int d = 0; d < row_len; ++d)
        kernel_fft_[d] = green_density(params_, dt, (d - (n_x - 1)) * dx);
    fft_pow2(kernel_fft_, -1);
}

std::span<const double> SolverWorkspace::j0_row(int r) const {
    return {j0_rows_.data() + static_cast<std::size_t>(r) * grid_.n_x,
            static_cast<std::size_t>(grid_.n_x)};
}

namespace {

// one spatial pass: out[i] = sum_j kernel[i-j] * bracket[j], via the padded FFT
void apply_kernel(std::span<const std::complex<double>> kernel_fft, std::size_t pad,
                  int n_x, std::span<const double> bracket, std::span<double> out,
                  std::vector<std::complex<double>>& buf) {
    buf.assign(pad, 0.0);
    for (int j = 0; j < n_x; ++j) buf[j] = bracket[j];
    fft_pow2(buf, -1);
    for (std::size_t q = 0; q < pad; ++q) buf[q] *= kernel_fft[q];
    fft_pow2(buf, +1);
    const double inv = 1.0 / static_cast<double>(pad);
    for (int i = 0; i < n_x; ++i) out[i] = buf[i + n_x - 1].real() * inv;
}

void check_finite_ceiling(std::span<const double> row, double ceiling, int step) {
    for (double v : row)
        if (!std::isfinite(v) || std::abs(v) > ceiling)
            throw Blowup("simulate: field exceeded ceiling at step " +
                         std::to_string(step) + "; dt is too coarse for this rho");
}

} // namespace

FieldPath simulate(const SolverWorkspace& ws, const RhoSpec& rho,
                   const NoiseLattice& noise, double blowup_ceiling) {
    const SpaceTimeGrid& grid = ws.grid();
    if (!(noise.grid == grid)) throw GridMismatch("simulate: noise grid differs");
    const int n_x = grid.n_x, n_t = grid.n_t;
    const double dt = grid.dt(), dx = grid.dx();

    FieldPath path;
    path.grid = grid;
    path.params = ws.params();
    path.seed = noise.seed;
    path.replicate = noise.replicate;
    path.scheme = Scheme::exponential_mild;
    path.warm_start_t = dt; // the noise of [0, dt] is dropped
    path.u.resize(static_cast<std::size_t>(n_t) * n_x);

    // row 0 is the homogeneous solution at the warm start
    std::copy(ws.j0_row(0).begin(), ws.j0_row(0).end(), path.row(0).begin());

    std::vector<double> bracket(n_x), stoch(n_x);
    std::vector<std::complex<double>> buf;
    for (int r = 0; r + 1 < n_t; ++r) {
        const auto u_r = path.row(r);
        const auto j0_r = ws.j0_row(r);
        for (int j = 0; j < n_x; ++j)
            bracket[j] = (u_r[j] - j0_r[j]) * dx +
                         rho(u_r[j]) * noise.increment(r + 1, j);
        apply_kernel(ws.kernel_fft(), ws.pad(), n_x, bracket, stoch, buf);
        const auto j0_next = ws.j0_row(r + 1);
        auto u_next = path.row(r + 1);
        for (int i = 0; i < n_x; ++i) u_next[i] = j0_next[i] + stoch[i];
        check_finite_ceiling(u_next, blowup_ceiling, r + 1);
    }
    return path;
}

FieldPath simulate(StableParams params, const InitialMeasure& measure,
                   const RhoSpec& rho, const SpaceTimeGrid& grid,
                   const NoiseLattice& noise, double blowup_ceiling) {
    SolverWorkspace ws(params, measure, grid);
    return simulate(ws, rho, noise, blowup_ceiling);
}

std::pair<FieldPath, FieldPath> simulate_coupled(StableParams params,
                                                 const InitialMeasure& mu1,
                                                 const InitialMeasure& mu2,
                                                 const RhoSpec& rho,
                                                 const SpaceTimeGrid& grid,
                                                 const NoiseLattice& noise,
                                                 double blowup_ceiling) {
    if (!InitialMeasure::leq(mu1, mu2))
        throw OutOfRange("simulate_coupled: mu1 must be <= mu2 in the representation order");
    SolverWorkspace ws1(params, mu1, grid);
    SolverWorkspace ws2(params, mu2, grid);
    return {simulate(ws1, rho, noise, blowup_ceiling),
            simulate(ws2, rho, noise, blowup_ceiling)};
}

FieldPath simulate_mollified(StableParams params, const InitialMeasure& measure,
                             const RhoSpec& rho, double eps,
                             const SpaceTimeGrid& grid, const NoiseLattice& noise,
                             double blowup_ceiling) {
    if (!(eps > 0.0)) throw OutOfRange("simulate_mollified: eps must be > 0");
    grid.validate(params.a);
    if (!(noise.grid == grid)) throw GridMismatch("simulate_mollified: noise grid differs");
    const int n_x = grid.n_x, n_t = grid.n_t;
    const double dt = grid.dt(), dx = grid.dx();

    FieldPath path;
    path.grid = grid;
    path.params = params;
    path.seed = noise.seed;
    path.replicate = noise.replicate;
    path.scheme = Scheme::mollified_sde;
    path.warm_start_t = 0.0;
    path.eps = eps;
    path.u.resize(static_cast<std::size_t>(n_t + 1) * n_x);

    // initial data (mu * G(eps, .))
    {
        auto u0 = path.row(0);
        for (int j = 0; j < n_x; ++j)
            u0[j] = j0(measure, params, eps, grid.x_center(j));
    }

    // exact exponential step for the linear part: e^{-dt/eps} I + R~(dt) *
    const ApproxKernel rk = make_approx_kernel(params, eps, dt);
    const double atom = rk.atom_weight;
    const int row_len = 2 * n_x - 1;
    std::size_t pad = 1;
    while (pad < static_cast<std::size_t>(row_len + n_x - 1)) pad <<= 1;
    std::vector<std::complex<double>> r_fft(pad, 0.0), phi_fft(pad, 0.0);
    for (int d = 0; d < row_len; ++d) {
        const double x = (d - (n_x - 1)) * dx;
        r_fft[d] = rk.value_at(x) * dx;
        phi_fft[d] = std::exp(-x * x / (2.0 * eps)) /
                     std::sqrt(2.0 * std::numbers::pi * eps);
    }
    fft_pow2(r_fft, -1);
    fft_pow2(phi_fft, -1);

    std::vector<double> dw(n_x), dweps(n_x), spread(n_x);
    std::vector<std::complex<double>> buf;
    for (int n = 0; n < n_t; ++n) {
        const auto u_n = path.row(n);
        // mollified noise increments: dW^eps_i = sum_k phi_eps(x_i - x_k) dW_{n,k}
        for (int k = 0; k < n_x; ++k) dw[k] = noise.increment(n, k);
        apply_kernel(phi_fft, pad, n_x, dw, dweps, buf);
        apply_kernel(r_fft, pad, n_x, u_n, spread, buf);
        auto u_next = path.row(n + 1);
        for (int i = 0; i < n_x; ++i)
            u_next[i] = atom * u_n[i] + spread[i] + rho(u_n[i]) * dweps[i];
        check_finite_ceiling(u_next, blowup_ceiling, n + 1);
    }
    return path;
}

} // namespace fracheat
