#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracheat/analysis.hpp"
#include "fracheat/config.hpp"
#include "fracheat/kernels.hpp"
#include "fracheat/semigroup.hpp"
#include "fracheat/solver.hpp"
#include "fracheat/stable.hpp"

namespace py = pybind11;
using namespace fracheat;

PYBIND11_MODULE(_fracheat, m) {
    m.doc() = "stochastic fractional heat equation laboratory";

    py::class_<StableParams>(m, "StableParams")
        .def_readonly("a", &StableParams::a)
        .def_readonly("delta", &StableParams::delta)
        .def("__repr__", [](const StableParams& p) {
            return "StableParams(a=" + std::to_string(p.a) +
                   ", delta=" + std::to_string(p.delta) + ")";
        });
    m.def("make_params", &make_params, py::arg("a"), py::arg("delta") = 0.0);

    m.def("green_density", &green_density, py::arg("params"), py::arg("t"), py::arg("x"));
    m.def("lambda_const", &lambda_const);
    m.def("gamma_const", &gamma_const);
    m.def("beta_integral", &beta_integral, py::arg("a"), py::arg("b"));

    py::class_<DensityTable>(m, "DensityTable")
        .def_readonly("xs", &DensityTable::xs)
        .def_readonly("values", &DensityTable::values)
        .def_readonly("trunc_error", &DensityTable::trunc_error)
        .def("trapezoid_mass", &DensityTable::trapezoid_mass)
        .def("write_csv", &DensityTable::write_csv);
    m.def(
        "green_table",
        [](StableParams p, double t, std::vector<double> xs, double tol) {
            return green_table(p, t, xs, tol);
        },
        py::arg("params"), py::arg("t"), py::arg("xs"), py::arg("tol_mass") = 1e-6);

    py::class_<InitialMeasure>(m, "InitialMeasure")
        .def_static("zero", &InitialMeasure::zero)
        .def_static("dirac", &InitialMeasure::dirac, py::arg("mass") = 1.0,
                    py::arg("location") = 0.0)
        .def_static("lebesgue", &InitialMeasure::lebesgue, py::arg("c") = 1.0)
        .def_static("indicator", &InitialMeasure::indicator, py::arg("half_width"),
                    py::arg("height") = 1.0)
        .def("add_atom", &InitialMeasure::add_atom)
        .def("scaled", &InitialMeasure::scaled)
        .def("ma_bound", &InitialMeasure::ma_bound);
    m.def("j0", &j0, py::arg("measure"), py::arg("params"), py::arg("t"), py::arg("x"));

    py::class_<RhoSpec>(m, "RhoSpec")
        .def_static("zero", &RhoSpec::zero)
        .def_static("linear", &RhoSpec::linear, py::arg("lambda_"))
        .def_static("custom", &RhoSpec::custom, py::arg("fn"), py::arg("lip"),
                    py::arg("growth_lip"), py::arg("theta"))
        .def("__call__", &RhoSpec::operator());

    py::class_<KernelGrid>(m, "KernelGrid")
        .def(py::init([](double T, double L, int n_t, int n_x) {
                 return KernelGrid{T, L, n_t, n_x};
             }),
             py::arg("horizon"), py::arg("half_width"), py::arg("n_t"), py::arg("n_x"));
    py::class_<KernelTable>(m, "KernelTable")
        .def_readonly("ts", &KernelTable::ts)
        .def_readonly("xs", &KernelTable::xs)
        .def_readonly("values", &KernelTable::values)
        .def_readonly("n_terms", &KernelTable::n_terms)
        .def_readonly("series_tail_bound", &KernelTable::series_tail_bound)
        .def_readonly("fitted_c", &KernelTable::fitted_c)
        .def("value_at", &KernelTable::value_at)
        .def("write_csv", &KernelTable::write_csv)
        .def("write_sidecar_json", &KernelTable::write_sidecar_json);
    m.def("ln_kernel", &ln_kernel, py::arg("n"), py::arg("lambda_"), py::arg("params"),
          py::arg("grid"));
    m.def("k_kernel", &k_kernel, py::arg("lambda_"), py::arg("params"), py::arg("grid"),
          py::arg("tol") = 1e-4, py::arg("max_terms") = 64);
    m.def("k_heat_closed", &k_heat_closed);
    m.def("k_wave_closed", &k_wave_closed);
    m.def("k_upper_bound", &k_upper_bound);
    m.def("moment_upper_bound", &moment_upper_bound, py::arg("p"), py::arg("measure"),
          py::arg("rho"), py::arg("params"), py::arg("grid"), py::arg("t"), py::arg("x"),
          py::arg("k_tol") = 1e-4);
    m.def("moment_growth_bound", &moment_growth_bound);

    m.def("r_kernel", &r_kernel, py::arg("params"), py::arg("eps"), py::arg("t"),
          py::arg("x"), py::arg("n_cut") = -1);
    m.def("approx_series_f", &approx_series_f, py::arg("b"), py::arg("z"));
    m.def("c_b_sup", &c_b_sup);
    py::class_<L1Error>(m, "L1Error")
        .def_readonly("numeric", &L1Error::numeric)
        .def_readonly("bound", &L1Error::bound);
    m.def("l1_error", &l1_error);
    py::class_<L2Profile>(m, "L2Profile")
        .def_readonly("integral", &L2Profile::integral)
        .def_readonly("r_l2_at_horizon", &L2Profile::r_l2_at_horizon);
    m.def("l2_error_profile", &l2_error_profile);
    m.def("psi_cutoff", &psi_cutoff);
    m.def("smooth_initial", &smooth_initial);

    py::class_<SpaceTimeGrid>(m, "SpaceTimeGrid")
        .def(py::init([](double T, double L, int n_t, int n_x, bool allow_coarse) {
                 return SpaceTimeGrid{T, L, n_t, n_x, allow_coarse};
             }),
             py::arg("horizon"), py::arg("half_width"), py::arg("n_t"), py::arg("n_x"),
             py::arg("allow_coarse_dt") = false)
        .def_readonly("horizon", &SpaceTimeGrid::horizon)
        .def_readonly("half_width", &SpaceTimeGrid::half_width)
        .def_readonly("n_t", &SpaceTimeGrid::n_t)
        .def_readonly("n_x", &SpaceTimeGrid::n_x)
        .def("dt", &SpaceTimeGrid::dt)
        .def("dx", &SpaceTimeGrid::dx);
    py::class_<NoiseLattice>(m, "NoiseLattice")
        .def_readonly("seed", &NoiseLattice::seed)
        .def_readonly("replicate", &NoiseLattice::replicate)
        .def("increment", &NoiseLattice::increment)
        .def("with_replicate", &NoiseLattice::with_replicate);
    m.def("make_noise", &make_noise, py::arg("grid"), py::arg("seed"));

    py::class_<FieldPath>(m, "FieldPath")
        .def_readonly("u", &FieldPath::u)
        .def_readonly("warm_start_t", &FieldPath::warm_start_t)
        .def_readonly("seed", &FieldPath::seed)
        .def("rows", &FieldPath::rows)
        .def("time", &FieldPath::time)
        .def("at_time_x", &FieldPath::at_time_x)
        .def("write_csv", &FieldPath::write_csv);
    m.def(
        "simulate",
        [](StableParams p, const InitialMeasure& mu, const RhoSpec& rho,
           const SpaceTimeGrid& g, const NoiseLattice& noise, double ceiling) {
            return simulate(p, mu, rho, g, noise, ceiling);
        },
        py::arg("params"), py::arg("measure"), py::arg("rho"), py::arg("grid"),
        py::arg("noise"), py::arg("blowup_ceiling") = 1e8);
    m.def("simulate_coupled", &simulate_coupled, py::arg("params"), py::arg("mu1"),
          py::arg("mu2"), py::arg("rho"), py::arg("grid"), py::arg("noise"),
          py::arg("blowup_ceiling") = 1e8);
    m.def("simulate_mollified", &simulate_mollified, py::arg("params"),
          py::arg("measure"), py::arg("rho"), py::arg("eps"), py::arg("grid"),
          py::arg("noise"), py::arg("blowup_ceiling") = 1e8);

    py::class_<ViolationReport>(m, "ViolationReport")
        .def_readonly("total_cells", &ViolationReport::total_cells)
        .def_readonly("violating_cells", &ViolationReport::violating_cells)
        .def_readonly("max_violation", &ViolationReport::max_violation)
        .def("violating_fraction", &ViolationReport::violating_fraction);
    m.def("comparison_report", &comparison_report);

    m.def("run_experiment_file", [](const std::string& config_path,
                                    const std::string& out_dir) {
        return run_experiment(ExperimentConfig::parse_file(config_path), out_dir);
    });
}
