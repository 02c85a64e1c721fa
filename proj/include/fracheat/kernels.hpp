#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracheat/measure.hpp"
#include "fracheat/stable.hpp"

namespace fracheat {

/// Multiplicative noise coefficient rho with its Lipschitz/growth metadata.
struct RhoSpec {
    enum class Kind { linear, custom };
    Kind kind = Kind::linear;
    double linear_lambda = 1.0;  // rho(u) = lambda u (kind == linear)
    double lip = 1.0;            // Lipschitz constant LIP_rho
    double growth_lip = 1.0;     // Lip_rho in |rho(x)|^2 <= Lip^2 (theta^2 + x^2)
    double theta = 0.0;
    double rho_zero = 0.0;
    std::function<double(double)> fn;

    static RhoSpec zero();
    static RhoSpec linear(double lambda);
    static RhoSpec custom(std::function<double(double)> fn, double lip,
                          double growth_lip, double theta);

    double operator()(double u) const {
        return kind == Kind::linear ? linear_lambda * u : fn(u);
    }
    bool is_zero() const { return kind == Kind::linear && linear_lambda == 0.0; }
};

/// Space-time lattice for the kernel tables: midpoint times (k+1/2) dt and
/// space nodes -L + j dx including both endpoints.
struct KernelGrid {
    double horizon = 1.0;
    double half_width = 8.0;
    int n_t = 128;
    int n_x = 256;

    double dt() const { return horizon / n_t; }
    double dx() const { return 2.0 * half_width / n_x; }
    std::vector<double> midpoint_times() const;
    std::vector<double> space_nodes() const;
};

struct KernelTable {
    double lambda = 0.0;
    StableParams params;
    std::vector<double> ts;      // midpoint times
    std::vector<double> xs;      // space nodes
    std::vector<double> values;  // ts.size() * xs.size(), time-major
    int n_terms = 0;
    double series_tail_bound = 0.0;
    double fitted_c = 0.0;

    double at(int it, int ix) const { return values[static_cast<std::size_t>(it) * xs.size() + ix]; }
    double& at(int it, int ix) { return values[static_cast<std::size_t>(it) * xs.size() + ix]; }
    double value_at(double t, double x) const; // bilinear interpolation
    double max_value() const;

    void write_csv(const std::string& path) const;
    void write_sidecar_json(const std::string& path) const;
};

/// Layer n of the iterated-kernel series (n+1 convolution factors of
/// lambda^2 G^2). Layers 0..n are computed; layer n is returned.
KernelTable ln_kernel(int n, double lambda, StableParams params, const KernelGrid& grid);

/// K(t,x;lambda) as the partial sum of layers until the newest layer's
/// maximum falls below tol times the running maximum.
KernelTable k_kernel(double lambda, StableParams params, const KernelGrid& grid,
                     double tol = 1e-4, int max_terms = 64);

double k_heat_closed(double nu, double lambda, double t, double x);
double k_wave_closed(double kappa, double lambda, double t, double x);

/// gamma = lambda^2 Lambda Gamma(1 - 1/a) from the kernel upper bound.
double k_bound_gamma(StableParams params, double lambda);

/// (C/t^{1/a}) G(t,x) (1 + t^{1/a} exp(gamma^{a*} t)).
double k_upper_bound(StableParams params, double lambda, double t, double x, double C);

/// Fit C on the even-index (calibration) half of the table with 5% headroom.
double fit_upper_bound_c(const KernelTable& table);

/// Theorem-style moment bound at a single probe; t must sit on the integer
/// time grid of `grid` and x on its space grid.
double moment_upper_bound(int p, const InitialMeasure& mu, const RhoSpec& rho,
                          StableParams params, const KernelGrid& grid, double t,
                          double x, double k_tol = 1e-4);

/// Q^p exp(Q p^{(2a-1)/(a-1)} t).
double moment_growth_bound(StableParams params, double p, double t, double Q);

} // namespace fracheat
