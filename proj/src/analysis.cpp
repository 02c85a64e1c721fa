#include "fracheat/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracheat/errors.hpp"
#include "fracheat/semigroup.hpp"

namespace fracheat {

void run_ensemble(const EnsembleSpec& spec,
                  const std::function<void(int, const FieldPath&)>& extract) {
    if (spec.scheme == Scheme::exponential_mild) {
        SolverWorkspace ws(spec.params, spec.measure, spec.grid);
        const NoiseLattice base = make_noise(spec.grid, spec.seed);
        parallel_for(spec.n_rep, [&](int r) {
            const FieldPath path =
                simulate(ws, spec.rho, base.with_replicate(r + 1), spec.blowup_ceiling);
            extract(r, path);
        });
    } else {
        const NoiseLattice base = make_noise(spec.grid, spec.seed);
        parallel_for(spec.n_rep, [&](int r) {
            const FieldPath path =
                simulate_mollified(spec.params, spec.measure, spec.rho, spec.eps,
                                   spec.grid, base.with_replicate(r + 1),
                                   spec.blowup_ceiling);
            extract(r, path);
        });
    }
}

EnsembleStats collect_probes(const EnsembleSpec& spec,
                             std::span<const ProbePoint> probes) {
    EnsembleStats stats;
    stats.n_rep = spec.n_rep;
    stats.seed_base = spec.seed;
    stats.probes.assign(probes.begin(), probes.end());
    stats.samples.assign(probes.size(), std::vector<double>(spec.n_rep, 0.0));
    run_ensemble(spec, [&](int r, const FieldPath& path) {
        for (std::size_t q = 0; q < stats.probes.size(); ++q)
            stats.samples[q][r] = path.at_time_x(stats.probes[q].t, stats.probes[q].x);
    });
    return stats;
}

MomentEstimate empirical_moment(const EnsembleStats& stats, int p, int probe_index) {
    if (p < 1) throw OutOfRange("empirical_moment: p must be >= 1");
    if (stats.n_rep < 2) throw OutOfRange("empirical_moment: need n_rep >= 2");
    const auto& s = stats.samples.at(probe_index);
    std::vector<double> powered(s.size());
    for (std::size_t i = 0; i < s.size(); ++i)
        powered[i] = std::pow(std::abs(s[i]), p);
    const MeanStderr ms = jackknife_mean(powered);
    return {ms.mean, ms.stderr};
}

LyapunovEstimate lyapunov_estimate(const EnsembleStats& stats, int p) {
    const int n = static_cast<int>(stats.probes.size());
    if (n < 4) throw InsufficientLadder("lyapunov_estimate: need >= 4 ladder rungs");
    for (int i = 1; i < n; ++i) {
        if (!(stats.probes[i].t > stats.probes[i - 1].t) ||
            stats.probes[i].x != stats.probes[0].x)
            throw InsufficientLadder("lyapunov_estimate: probes must ascend in t at fixed x");
    }
    // exponents are t -> infinity objects; use the upper half of the ladder
    const int first = n / 2;
    std::vector<double> ts, lo, mid, hi;
    for (int i = first; i < n; ++i) {
        const MomentEstimate m = empirical_moment(stats, p, i);
        const double floor_v = 1e-300;
        ts.push_back(stats.probes[i].t);
        mid.push_back(std::log(std::max(m.estimate, floor_v)));
        lo.push_back(std::log(std::max(m.estimate - 3.0 * m.stderr, floor_v)));
        hi.push_back(std::log(std::max(m.estimate + 3.0 * m.stderr, floor_v)));
    }
    if (ts.size() < 2) throw InsufficientLadder("lyapunov_estimate: upper half too short");
    LyapunovEstimate out;
    out.fit = linear_fit(ts, mid);
    out.lower_slope = linear_fit(ts, lo).slope;
    out.upper_slope = linear_fit(ts, hi).slope;
    return out;
}

ViolationReport comparison_report(const FieldPath& path1, const FieldPath& path2,
                                  double tol) {
    if (!(path1.grid == path2.grid) || path1.rows() != path2.rows())
        throw GridMismatch("comparison_report: paths live on different grids");
    ViolationReport rep;
    rep.total_cells = static_cast<long>(path1.u.size());
    for (std::size_t i = 0; i < path1.u.size(); ++i) {
        const double gap = path1.u[i] - path2.u[i];
        if (gap > tol) {
            ++rep.violating_cells;
            rep.max_violation = std::max(rep.max_violation, gap);
            rep.violation_l1 += gap;
        }
    }
    return rep;
}

std::vector<double> box_minima(const EnsembleSpec& spec, double t0, double t1,
                               double x0, double x1) {
    std::vector<double> minima(spec.n_rep, 0.0);
    run_ensemble(spec, [&](int r, const FieldPath& path) {
        double m = std::numeric_limits<double>::infinity();
        for (int row = 0; row < path.rows(); ++row) {
            const double t = path.time(row);
            if (t < t0 || t > t1) continue;
            for (int j = 0; j < path.grid.n_x; ++j) {
                const double x = path.grid.x_center(j);
                if (x < x0 || x > x1) continue;
                m = std::min(m, path.row(row)[j]);
            }
        }
        minima[r] = m;
    });
    return minima;
}

double positivity_ell(double a, double eps) {
    const double l = std::abs(std::log(eps));
    const double ll = std::log(std::max(l, 1.0 + 1e-12));
    return std::pow(l, 1.0 - 1.0 / a) * std::pow(ll, 2.0 - 1.0 / a);
}

PositivityCurve positivity_tail(std::span<const double> minima, double a,
                                std::span<const double> eps_ladder) {
    PositivityCurve curve;
    curve.n_rep = static_cast<int>(minima.size());
    const double z99 = 2.5758293035489004;
    std::vector<double> xs, ys, ws;
    for (double eps : eps_ladder) {
        long hits = 0;
        for (double m : minima)
            if (m < eps) ++hits;
        const double p = static_cast<double>(hits) / curve.n_rep;
        const WilsonInterval wi = wilson_interval(hits, curve.n_rep, z99);
        curve.eps.push_back(eps);
        curve.p_hat.push_back(p);
        curve.wilson_lo.push_back(wi.lo);
        curve.wilson_hi.push_back(wi.hi);
        curve.ell.push_back(positivity_ell(a, eps));
        if (hits > 0 && hits < curve.n_rep) {
            xs.push_back(curve.ell.back());
            ys.push_back(std::log(p));
            // delta-method variance of log p_hat
            ws.push_back(static_cast<double>(curve.n_rep) * p / (1.0 - p));
        }
    }
    if (xs.size() >= 2) curve.log_p_vs_ell = weighted_linear_fit(xs, ys, ws);
    return curve;
}

HolderEstimate holder_exponent(const EnsembleSpec& spec, Direction direction,
                               int n_lags) {
    if (n_lags < 2) throw InsufficientLags("holder_exponent: need >= 2 lags");
    const SpaceTimeGrid& g = spec.grid;
    const int max_lag = 1 << (n_lags - 1);
    if (direction == Direction::space && max_lag >= g.n_x / 4)
        throw InsufficientLags("holder_exponent: spatial lags exceed the grid");
    if (direction == Direction::time && max_lag >= g.n_t / 4)
        throw InsufficientLags("holder_exponent: time lags exceed the ladder");

    std::vector<std::vector<double>> sums(n_lags, std::vector<double>(spec.n_rep, 0.0));
    run_ensemble(spec, [&](int r, const FieldPath& path) {
        const int row_start = path.rows() / 4; // probes away from t = 0
        for (int L = 0; L < n_lags; ++L) {
            const int lag = 1 << L;
            double acc = 0.0;
            long cnt = 0;
            if (direction == Direction::space) {
                const int j_lo = g.n_x / 4, j_hi = 3 * g.n_x / 4 - max_lag;
                for (int row = row_start; row < path.rows(); ++row) {
                    const auto u = path.row(row);
                    for (int j = j_lo; j < j_hi; ++j) {
                        const double d = u[j + lag] - u[j];
                        acc += d * d;
                        ++cnt;
                    }
                }
            } else {
                const int j_lo = g.n_x / 4, j_hi = 3 * g.n_x / 4;
                for (int row = row_start; row + max_lag < path.rows(); ++row) {
                    const auto u0 = path.row(row);
                    const auto u1 = path.row(row + lag);
                    for (int j = j_lo; j < j_hi; ++j) {
                        const double d = u1[j] - u0[j];
                        acc += d * d;
                        ++cnt;
                    }
                }
            }
            sums[L][r] = cnt > 0 ? acc / cnt : 0.0;
        }
    });

    HolderEstimate out;
    std::vector<double> lx, ly;
    for (int L = 0; L < n_lags; ++L) {
        const int lag = 1 << L;
        const MeanStderr ms = jackknife_mean(sums[L]);
        const double step = direction == Direction::space ? g.dx() : g.dt();
        out.lags.push_back(lag * step);
        out.second_moments.push_back(ms.mean);
        lx.push_back(std::log(lag * step));
        ly.push_back(std::log(std::max(ms.mean, 1e-300)));
    }
    out.fit = linear_fit(lx, ly);
    return out;
}

TestFunction cosine_bump(double w) {
    if (!(w > 0.0)) throw OutOfRange("cosine_bump: w must be > 0");
    TestFunction phi;
    phi.lo = -w;
    phi.hi = w;
    phi.fn = [w](double x) {
        if (std::abs(x) >= w) return 0.0;
        return 0.5 * (1.0 + std::cos(std::numbers::pi * x / w));
    };
    return phi;
}

double measure_pairing(const InitialMeasure& mu, const TestFunction& phi) {
    double out = 0.0;
    for (const Atom& a : mu.atoms()) out += a.mass * phi.fn(a.location);
    if (mu.has_density()) {
        // density part (polyline and tail) integrated over the support of phi
        const int cells = 4096;
        const double h = (phi.hi - phi.lo) / cells;
        double acc = 0.0;
        for (int i = 0; i <= cells; ++i) {
            const double y = phi.lo + i * h;
            const double w = (i == 0 || i == cells) ? 0.5 : 1.0;
            acc += w * mu.density_at(y) * phi.fn(y);
        }
        out += acc * h;
    }
    return out;
}

std::vector<CurvePoint> weak_convergence(const EnsembleSpec& spec,
                                         std::span<const double> t_ladder,
                                         const TestFunction& phi) {
    const double target = measure_pairing(spec.measure, phi);
    const SpaceTimeGrid& g = spec.grid;
    std::vector<std::vector<double>> gaps(t_ladder.size(),
                                          std::vector<double>(spec.n_rep, 0.0));
    run_ensemble(spec, [&](int r, const FieldPath& path) {
        for (std::size_t q = 0; q < t_ladder.size(); ++q) {
            const int row = std::clamp(
                static_cast<int>(std::llround((t_ladder[q] - path.warm_start_t) / g.dt())),
                0, path.rows() - 1);
            double pairing = 0.0;
            const auto u = path.row(row);
            for (int j = 0; j < g.n_x; ++j) pairing += u[j] * phi.fn(g.x_center(j));
            pairing *= g.dx();
            const double gap = pairing - target;
            gaps[q][r] = gap * gap;
        }
    });
    std::vector<CurvePoint> curve(t_ladder.size());
    for (std::size_t q = 0; q < t_ladder.size(); ++q) {
        const MeanStderr ms = jackknife_mean(gaps[q]);
        curve[q] = {t_ladder[q], ms.mean, ms.stderr};
    }
    return curve;
}

std::vector<CurvePoint> approx_convergence(const EnsembleSpec& spec,
                                           std::span<const double> eps_ladder,
                                           ProbePoint probe) {
    std::vector<CurvePoint> curve;
    // reference ensemble from mu itself, probe values per replicate
    std::vector<double> ref(spec.n_rep, 0.0);
    run_ensemble(spec, [&](int r, const FieldPath& path) {
        ref[r] = path.at_time_x(probe.t, probe.x);
    });
    for (double eps : eps_ladder) {
        EnsembleSpec smooth = spec;
        smooth.measure = smooth_initial(spec.measure, spec.params, eps);
        std::vector<double> gap2(spec.n_rep, 0.0);
        run_ensemble(smooth, [&](int r, const FieldPath& path) {
            const double d = ref[r] - path.at_time_x(probe.t, probe.x);
            gap2[r] = d * d;
        });
        const MeanStderr ms = jackknife_mean(gap2);
        curve.push_back({eps, ms.mean, ms.stderr});
    }
    return curve;
}

} // namespace fracheat
