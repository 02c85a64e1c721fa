#pragma once

#include <span>
#include <vector>

#include "fracheat/measure.hpp"
#include "fracheat/stable.hpp"

namespace fracheat {

/// Kernel of exp(t (G(eps)-I)/eps) minus its atom at zero: a point mass of
/// weight e^{-t/eps} plus the density r_values on a uniform grid.
struct ApproxKernel {
    double eps = 0.0;
    StableParams params;
    double t = 0.0;
    std::vector<double> xs;       // uniform, symmetric
    std::vector<double> r_values; // R~_eps(t, x)
    double atom_weight = 0.0;     // e^{-t/eps}

    double value_at(double x) const; // linear interpolation, 0 outside
    double mass() const;             // trapezoid + analytic tail remainder
    double l2_mass() const;          // ∫ R~^2 dx
    double tail_remainder = 0.0;     // estimated mass beyond the grid
};

/// Pointwise truncated Poisson mixture e^{-t/eps} sum (t/eps)^n/n! G(n eps, x).
/// n_cut < 0 picks mean + 12 sd + 30; the discarded Poisson tail must stay
/// below 1e-12 or TruncationTooTight is thrown.
double r_kernel(StableParams params, double eps, double t, double x, int n_cut = -1);

/// Full table of R~_eps(t,.) by one inverse-transform pass of the closed-form
/// spectrum exp(z(e^{eps psi}-1)) - e^{-z}.
ApproxKernel make_approx_kernel(StableParams params, double eps, double t);

/// e^{-t/eps} f + R~_eps(t,.) * f on a uniform grid with spacing dx.
std::vector<double> g_eps_apply(std::span<const double> f, StableParams params,
                                double eps, double t, double dx);

/// f_b(z) = e^{-z} z^{b+1} sum_{k>=1} z^{k-1}/(k! k^b).
double approx_series_f(double b, double z);

/// C_b = sup_{z>=0} f_b(z), finite for b >= -1.
double c_b_sup(double b);

struct L1Error {
    double numeric = 0.0;
    double bound = 0.0;
};

/// Numeric L1 distance between R~_eps(t,.) and G(t,.) against the lemma
/// bound e^{-t/eps} + C sqrt(eps/t) with C assembled from the fitted K_{a,1}.
L1Error l1_error(StableParams params, double eps, double t);

/// The constant C of the L1 lemma (exposed for reporting).
double l1_bound_constant(StableParams params);

struct L2Profile {
    double integral = 0.0;       // ∫_0^T ∫ (R~ - G)^2 dx ds
    double r_l2_at_horizon = 0.0; // ∫ R~^2(T, x) dx
};

L2Profile l2_error_profile(StableParams params, double eps, double T);

/// ∫ R~_eps^2(t,.) dx alone, for the C_{a,delta} t^{-1/a} envelope check.
double r_l2_mass(StableParams params, double eps, double t);

/// Closed form of ∫_0^T ∫ G^2(s,x) dx ds (symmetric-stable value, valid for
/// every delta in range).
double g_l2_time_integral(StableParams params, double T);

/// ∫ G^2(t,x) dx closed form.
double g_l2_mass(StableParams params, double t);

/// Piecewise-linear cutoff: 1 on [-1/eps, 1/eps], 0 beyond 1 + 1/eps.
double psi_cutoff(double eps, double x);

/// (mu psi_eps) * G(eps,.) as a density-form measure on a bounded grid.
InitialMeasure smooth_initial(const InitialMeasure& mu, StableParams params, double eps);

/// ∫ G(t, x-y) f(y) dy over [s0, s1] for a bounded integrand.
double green_convolve(StableParams params, double t, double x,
                      const std::function<double(double)>& f, double s0, double s1);

} // namespace fracheat
