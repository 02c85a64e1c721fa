#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fracheat/kernels.hpp"
#include "fracheat/numerics.hpp"
#include "fracheat/solver.hpp"

namespace fracheat {

struct ProbePoint {
    double t = 0.0;
    double x = 0.0;
};

/// Everything needed to reproduce one ensemble: replicate r uses the noise
/// lattice with replicate id r+1 under seed_base.
struct EnsembleSpec {
    StableParams params;
    InitialMeasure measure;
    RhoSpec rho;
    SpaceTimeGrid grid;
    uint64_t seed = 1;
    int n_rep = 100;
    Scheme scheme = Scheme::exponential_mild;
    double eps = 0.0; // mollified scheme only
    double blowup_ceiling = 1e8;
};

/// Run the ensemble replicate by replicate, applying `extract` to each path.
/// Deterministic: results land in per-replicate slots regardless of schedule.
void run_ensemble(const EnsembleSpec& spec,
                  const std::function<void(int, const FieldPath&)>& extract);

struct EnsembleStats {
    int n_rep = 0;
    uint64_t seed_base = 0;
    std::vector<ProbePoint> probes;
    std::vector<std::vector<double>> samples; // [probe][replicate]
};

EnsembleStats collect_probes(const EnsembleSpec& spec,
                             std::span<const ProbePoint> probes);

struct MomentEstimate {
    double estimate = 0.0;
    double stderr = 0.0;
};

/// Sample mean of |u|^p at one probe with jackknife standard error.
MomentEstimate empirical_moment(const EnsembleStats& stats, int p, int probe_index);

struct LyapunovEstimate {
    double lower_slope = 0.0;
    double upper_slope = 0.0;
    SlopeFit fit; // central fit of log E|u|^p against t, upper half of the ladder
};

/// Probes must form an ascending t-ladder (>= 4 rungs) at a fixed x.
LyapunovEstimate lyapunov_estimate(const EnsembleStats& stats, int p);

struct ViolationReport {
    long total_cells = 0;
    long violating_cells = 0;
    double max_violation = 0.0;
    double violation_l1 = 0.0;
    std::vector<double> refinement_trend; // violating fractions per grid level
    double violating_fraction() const {
        return total_cells > 0 ? static_cast<double>(violating_cells) / total_cells : 0.0;
    }
};

/// Cells where path1 exceeds path2 by more than tol.
ViolationReport comparison_report(const FieldPath& path1, const FieldPath& path2,
                                  double tol);

/// Per-replicate minimum of u over the compact box [t0,t1] x [x0,x1].
std::vector<double> box_minima(const EnsembleSpec& spec, double t0, double t1,
                               double x0, double x1);

struct PositivityCurve {
    std::vector<double> eps, p_hat, wilson_lo, wilson_hi, ell;
    SlopeFit log_p_vs_ell; // weighted fit over rungs with 0 < p_hat < 1
    int n_rep = 0;
};

/// Empirical P(min < eps) over the ladder, Wilson 99% intervals, and the
/// shape regression against ell(eps) = |log eps|^{1-1/a} (log|log eps|)^{2-1/a}.
PositivityCurve positivity_tail(std::span<const double> minima, double a,
                                std::span<const double> eps_ladder);

double positivity_ell(double a, double eps);

enum class Direction { time, space };

struct HolderEstimate {
    SlopeFit fit; // log-log regression of E |increment|^2 against lag
    std::vector<double> lags, second_moments;
};

/// Dyadic-lag increment regression over the t >= T/4 portion of the paths.
HolderEstimate holder_exponent(const EnsembleSpec& spec, Direction direction,
                               int n_lags = 5);

struct TestFunction {
    std::function<double(double)> fn;
    double lo = -1.0, hi = 1.0; // compact support
};

/// Smooth cosine bump of unit height supported on [-w, w].
TestFunction cosine_bump(double w);

/// Exact pairing <mu, phi> from the measure representation.
double measure_pairing(const InitialMeasure& mu, const TestFunction& phi);

struct CurvePoint {
    double key = 0.0;
    double value = 0.0;
    double stderr = 0.0;
};

/// E[(<u(t), phi> - <mu, phi>)^2] along the t ladder.
std::vector<CurvePoint> weak_convergence(const EnsembleSpec& spec,
                                         std::span<const double> t_ladder,
                                         const TestFunction& phi);

/// E[(u - u_eps)^2] at a probe along the eps ladder, noise shared pairwise.
std::vector<CurvePoint> approx_convergence(const EnsembleSpec& spec,
                                           std::span<const double> eps_ladder,
                                           ProbePoint probe);

} // namespace fracheat
