#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fracheat/kernels.hpp"
#include "fracheat/measure.hpp"
#include "fracheat/stable.hpp"

namespace fracheat {

/// Truncated space-time lattice [0,T] x [-L,L]; space nodes are cell centers.
struct SpaceTimeGrid {
    double horizon = 1.0;
    double half_width = 8.0;
    int n_t = 64;
    int n_x = 128;
    bool allow_coarse_dt = false; // waive the dt <= dx^a sanity check

    double dt() const { return horizon / n_t; }
    double dx() const { return 2.0 * half_width / n_x; }
    double x_center(int j) const { return -half_width + (j + 0.5) * dx(); }
    void validate(double a) const;
    friend bool operator==(const SpaceTimeGrid&, const SpaceTimeGrid&) = default;
};

/// Deterministic white-noise increments, location-addressed: the value of
/// cell (n, j) depends only on (seed, replicate, n, j).
struct NoiseLattice {
    SpaceTimeGrid grid;
    uint64_t seed = 0;
    uint32_t replicate = 0;

    /// Gaussian increment with variance dt * dx.
    double increment(uint32_t n, uint32_t j) const;
    NoiseLattice with_replicate(uint32_t r) const;
};

NoiseLattice make_noise(const SpaceTimeGrid& grid, uint64_t seed);

enum class Scheme { exponential_mild, mollified_sde };

struct FieldPath {
    SpaceTimeGrid grid;
    StableParams params;
    uint64_t seed = 0;
    uint32_t replicate = 0;
    Scheme scheme = Scheme::exponential_mild;
    double warm_start_t = 0.0;
    double eps = 0.0; // mollified scheme only
    std::vector<double> u; // rows x n_x, row r at time warm_start_t + r dt

    int rows() const { return static_cast<int>(u.size()) / grid.n_x; }
    double time(int r) const { return warm_start_t + r * grid.dt(); }
    std::span<const double> row(int r) const {
        return {u.data() + static_cast<std::size_t>(r) * grid.n_x,
                static_cast<std::size_t>(grid.n_x)};
    }
    std::span<double> row(int r) {
        return {u.data() + static_cast<std::size_t>(r) * grid.n_x,
                static_cast<std::size_t>(grid.n_x)};
    }
    /// Value at the row/space indices nearest to (t, x).
    double at_time_x(double t, double x) const;

    void write_csv(const std::string& path) const;
};

/// Precomputed homogeneous solution and one-step kernel for an ensemble of
/// replicates over the same (params, measure, grid). Immutable once built.
class SolverWorkspace {
public:
    SolverWorkspace(StableParams params, InitialMeasure measure,
                    const SpaceTimeGrid& grid);

    StableParams params() const { return params_; }
    const InitialMeasure& measure() const { return measure_; }
    const SpaceTimeGrid& grid() const { return grid_; }
    std::span<const double> j0_row(int r) const; // time (r+1) dt
    std::span<const std::complex<double>> kernel_fft() const { return kernel_fft_; }
    std::size_t pad() const { return pad_; }

private:
    StableParams params_;
    InitialMeasure measure_;
    SpaceTimeGrid grid_;
    std::vector<double> j0_rows_;
    std::vector<std::complex<double>> kernel_fft_;
    std::size_t pad_ = 0;
};

/// Exponential-mild scheme: the homogeneous part is carried analytically,
/// the stochastic part is propagated by the one-step kernel. With rho == 0
/// the path reproduces J0 exactly.
FieldPath simulate(const SolverWorkspace& ws, const RhoSpec& rho,
                   const NoiseLattice& noise, double blowup_ceiling = 1e8);
FieldPath simulate(StableParams params, const InitialMeasure& measure,
                   const RhoSpec& rho, const SpaceTimeGrid& grid,
                   const NoiseLattice& noise, double blowup_ceiling = 1e8);

/// Two measures, one noise. mu1 <= mu2 is required in the representation order.
std::pair<FieldPath, FieldPath> simulate_coupled(StableParams params,
                                                 const InitialMeasure& mu1,
                                                 const InitialMeasure& mu2,
                                                 const RhoSpec& rho,
                                                 const SpaceTimeGrid& grid,
                                                 const NoiseLattice& noise,
                                                 double blowup_ceiling = 1e8);

/// Mollified-noise SDE system: exact exponential step for the discrete
/// generator, Ito left-point noise coupling through the Gaussian mollifier.
FieldPath simulate_mollified(StableParams params, const InitialMeasure& measure,
                             const RhoSpec& rho, double eps,
                             const SpaceTimeGrid& grid, const NoiseLattice& noise,
                             double blowup_ceiling = 1e8);

} // namespace fracheat
