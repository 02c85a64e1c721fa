#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "fracheat/measure.hpp"

namespace fracheat {

/// Order and skewness of the fractional operator. Valid range: a in ]1,2],
/// |delta| <= 2-a.
struct StableParams {
    double a = 2.0;
    double delta = 0.0;
    friend bool operator==(const StableParams&, const StableParams&) = default;
};

StableParams make_params(double a, double delta);

/// The t=1 stable density G(1,.) for one parameter pair, with everything the
/// rest of the project needs from it: values, derivative, CDF, supremum,
/// fitted tail constants. Built once by Fourier inversion on a fine grid;
/// the far tails use the asymptotic power series. Immutable after
/// construction, safe for concurrent reads.
class StableDensity {
public:
    explicit StableDensity(StableParams p);

    StableParams params() const { return p_; }

    double density1(double z) const;
    double density(double t, double x) const;
    double derivative1(double z) const;

    /// P(Z <= z) for Z with density G(1,.).
    double cdf1(double z) const;

    /// ∫_{u0}^{u1} G(t,u) du.
    double interval_mass(double t, double u0, double u1) const;

    double sup_value() const { return sup_value_; }    // Λ
    double sup_location() const { return sup_loc_; }

    /// Fitted constants for G(1,x) <= K0/(1+|x|^{1+a}) and
    /// |d/dx G(1,x)| <= K1/(1+|x|^{2+a}). Empirical fits, not transcriptions.
    double k0_fitted() const { return k0_; }
    double k1_fitted() const { return k1_; }

    double tail_mass_right(double z) const;
    double tail_mass_left(double z) const;

    double core_halfwidth() const { return x_core_; }
    double grid_step() const { return dz_; }
    double imaginary_residue() const { return im_residue_; }

private:
    void build_table();
    double tail_series(double z) const;            // signed z, |z| >= crossover
    double tail_series_derivative(double z) const;
    double core_value(double z) const;              // Hermite interpolation
    double core_derivative(double z) const;
    double core_cdf(double z) const;

    StableParams p_;
    double dz_ = 1.0 / 128.0;
    double x_core_ = 64.0;
    int n_ = 0;                 // nodes in [-x_core, x_core]
    std::vector<double> val_, dval_, cum_;
    double right_coef_[3] = {0, 0, 0};  // z^{-1-na} coefficients, z -> +inf
    double left_coef_[3] = {0, 0, 0};   // for -z, z -> -inf
    double sup_value_ = 0.0, sup_loc_ = 0.0;
    double k0_ = 0.0, k1_ = 0.0;
    double im_residue_ = 0.0;
    bool gaussian_ = false;
};

/// Shared build-once cache keyed by params: concurrent readers, one builder.
const StableDensity& stable_density(StableParams p);

/// Tabulated density at one time with truncation bookkeeping.
struct DensityTable {
    StableParams params;
    double t = 1.0;
    std::vector<double> xs;
    std::vector<double> values;
    double trunc_error = 0.0;

    double trapezoid_mass() const;
    void write_csv(const std::string& path) const;
};

double green_density(StableParams p, double t, double x);
DensityTable green_table(StableParams p, double t, std::span<const double> xs,
                         double tol_mass = 1e-6);

/// Homogeneous solution J0(t,x) = (G(t,.) * mu)(x).
double j0(const InitialMeasure& mu, StableParams p, double t, double x);

/// ∫_{s0}^{s1} G(t, x-y) f(y) dy for a bounded integrand. Quadrature runs on
/// the master z-grid of the density; support beyond its reach is integrated
/// in y-space under the tail series.
double green_convolve(StableParams p, double t, double x,
                      const std::function<double(double)>& f, double s0, double s1);

/// Λ = sup_x G(1,x).
double lambda_const(StableParams p);

/// min{P(Z<=0), P(Z>=0)}/2 for the t=1 density; exactly 1/4 when delta = 0.
double gamma_const(StableParams p);

/// Closed form of ∫_0^∞ y^b/(1+y^{2+a}) dy for a > 0 and b in ]-1, a+1[.
double beta_integral(double a, double b);

} // namespace fracheat
