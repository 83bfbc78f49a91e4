#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "advdiff/csv.hpp"
#include "advdiff/experiments.hpp"
#include "advdiff/random.hpp"

namespace py = pybind11;
using namespace advdiff;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_array2d(const SpaceTimeField& f) {
    py::array_t<double> out({static_cast<py::ssize_t>(f.nt() + 1),
                             static_cast<py::ssize_t>(f.nx() + 1)});
    std::copy(f.data().begin(), f.data().end(), out.mutable_data());
    return out;
}

SpaceTimeField field_from_array(py::array_t<double, py::array::c_style> a) {
    if (a.ndim() != 2) throw PreconditionError("expected a 2D array");
    SpaceTimeField f(static_cast<int>(a.shape(0)) - 1,
                     static_cast<int>(a.shape(1)) - 1);
    std::copy(a.data(), a.data() + a.size(),
              const_cast<double*>(f.data().data()));
    return f;
}

BoundaryTrace trace_from(const std::vector<double>& values, Boundary side) {
    return BoundaryTrace{side, values};
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "boundary null-control laboratory for a 1D advection-diffusion "
              "system with dynamic boundary conditions";

    py::register_exception<PreconditionError>(m, "PreconditionError",
                                              PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverFailure", PyExc_RuntimeError);

    py::enum_<Boundary>(m, "Boundary")
        .value("gamma0", Boundary::gamma0_right, "outflow end x = 0")
        .value("gamma1", Boundary::gamma1_left, "inflow end x = -L");

    py::class_<PhysParams>(m, "PhysParams")
        .def(py::init([](double L, double T, double eps, Boundary side) {
                 PhysParams p{L, T, eps, side};
                 p.validate();
                 return p;
             }),
             py::arg("L"), py::arg("T"), py::arg("eps"),
             py::arg("control_side") = Boundary::gamma0_right)
        .def_readwrite("L", &PhysParams::L)
        .def_readwrite("T", &PhysParams::T)
        .def_readwrite("eps", &PhysParams::eps)
        .def_readwrite("control_side", &PhysParams::control_side);

    py::class_<Grid1D>(m, "Grid1D")
        .def(py::init<double, int>(), py::arg("L"), py::arg("nx"))
        .def_property_readonly("length", &Grid1D::length)
        .def_property_readonly("nx", &Grid1D::nx)
        .def_property_readonly("h", &Grid1D::h)
        .def_property_readonly("nodes", [](const Grid1D& g) {
            return to_array({g.nodes().begin(), g.nodes().end()});
        });

    py::class_<TimeGrid>(m, "TimeGrid")
        .def(py::init<double, int>(), py::arg("T"), py::arg("nt"))
        .def_property_readonly("horizon", &TimeGrid::horizon)
        .def_property_readonly("nt", &TimeGrid::nt)
        .def_property_readonly("dt", &TimeGrid::dt)
        .def("level", &TimeGrid::level)
        .def("quad_weights",
             [](const TimeGrid& tg) { return to_array(tg.quad_weights()); });

    py::class_<XProduct>(m, "XProduct")
        .def_property_readonly(
            "weights", [](const XProduct& xp) { return to_array(xp.weights); });

    m.def("build_x_product", &build_x_product, py::arg("grid"), py::arg("eps"));
    m.def(
        "x_inner",
        [](const std::vector<double>& a, const std::vector<double>& b,
           const XProduct& xp) { return x_inner(a, b, xp); },
        py::arg("a"), py::arg("b"), py::arg("xp"));
    m.def(
        "x_norm",
        [](const std::vector<double>& a, const XProduct& xp) {
            return x_norm(a, xp);
        },
        py::arg("a"), py::arg("xp"));
    m.def(
        "trace_l2_sq",
        [](const std::vector<double>& values, Boundary side, const TimeGrid& tg) {
            return trace_l2_sq(trace_from(values, side), tg);
        },
        py::arg("values"), py::arg("side"), py::arg("tg"));

    py::class_<SemidiscreteSystem>(m, "SemidiscreteSystem")
        .def_readonly("eps", &SemidiscreteSystem::eps)
        .def_readonly("theta", &SemidiscreteSystem::theta)
        .def_readonly("control_side", &SemidiscreteSystem::control_side)
        .def_readonly("control_node", &SemidiscreteSystem::control_node)
        .def_readonly("obs_node", &SemidiscreteSystem::obs_node)
        .def_property_readonly(
            "mass",
            [](const SemidiscreteSystem& s) { return to_array(s.mass.weights); })
        .def_property_readonly("x_product",
                               [](const SemidiscreteSystem& s) { return s.mass; });

    m.def("assemble", &assemble, py::arg("grid"), py::arg("eps"),
          py::arg("control_side"), py::arg("theta"), py::arg("upwind") = false);
    m.def(
        "monotonicity_check",
        [](const SemidiscreteSystem& sys, int samples, std::uint64_t seed) {
            return monotonicity_check(sys, samples, seed);
        },
        py::arg("sys"), py::arg("samples") = 64, py::arg("seed") = 1234);

    py::class_<ForwardSolution>(m, "ForwardSolution")
        .def_property_readonly(
            "history",
            [](const ForwardSolution& s) { return to_array2d(s.history); })
        .def("terminal",
             [](const ForwardSolution& s) { return to_array(s.terminal()); })
        .def("trace", [](const ForwardSolution& s, Boundary side) {
            return to_array(s.trace(side).values);
        });

    py::class_<AdjointSolution>(m, "AdjointSolution")
        .def_property_readonly(
            "history",
            [](const AdjointSolution& s) { return to_array2d(s.history); })
        .def("initial",
             [](const AdjointSolution& s) { return to_array(s.initial()); })
        .def_property_readonly(
            "observed",
            [](const AdjointSolution& s) { return to_array(s.observed.values); })
        .def("trace", [](const AdjointSolution& s, Boundary side) {
            return to_array(s.trace(side).values);
        });

    m.def(
        "solve_forward",
        [](const SemidiscreteSystem& sys, const TimeGrid& tg,
           const std::vector<double>& u0,
           std::optional<py::array_t<double, py::array::c_style>> f,
           std::optional<std::vector<double>> g0,
           std::optional<std::vector<double>> g1,
           std::optional<std::vector<double>> v) {
            std::optional<SpaceTimeField> ff;
            if (f) ff = field_from_array(*f);
            std::optional<BoundaryTrace> t0, t1, tv;
            if (g0) t0 = trace_from(*g0, Boundary::gamma0_right);
            if (g1) t1 = trace_from(*g1, Boundary::gamma1_left);
            if (v) tv = trace_from(*v, sys.control_side);
            return solve_forward(sys, tg, u0, ff ? &*ff : nullptr,
                                 t0 ? &*t0 : nullptr, t1 ? &*t1 : nullptr,
                                 tv ? &*tv : nullptr);
        },
        py::arg("sys"), py::arg("tg"), py::arg("u0"), py::arg("f") = py::none(),
        py::arg("g0") = py::none(), py::arg("g1") = py::none(),
        py::arg("v") = py::none());

    m.def(
        "solve_adjoint",
        [](const SemidiscreteSystem& sys, const TimeGrid& tg,
           const std::vector<double>& phiT,
           std::optional<py::array_t<double, py::array::c_style>> f,
           std::optional<std::vector<double>> g0,
           std::optional<std::vector<double>> g1) {
            std::optional<SpaceTimeField> ff;
            if (f) ff = field_from_array(*f);
            std::optional<BoundaryTrace> t0, t1;
            if (g0) t0 = trace_from(*g0, Boundary::gamma0_right);
            if (g1) t1 = trace_from(*g1, Boundary::gamma1_left);
            return solve_adjoint(sys, tg, phiT, ff ? &*ff : nullptr,
                                 t0 ? &*t0 : nullptr, t1 ? &*t1 : nullptr);
        },
        py::arg("sys"), py::arg("tg"), py::arg("phiT"), py::arg("f") = py::none(),
        py::arg("g0") = py::none(), py::arg("g1") = py::none());

    m.def(
        "duality_residual",
        [](const SemidiscreteSystem& sys, const TimeGrid& tg,
           const std::vector<double>& u0, const std::vector<double>& v,
           const std::vector<double>& phiT) {
            return duality_residual(sys, tg, u0, trace_from(v, sys.control_side),
                                    phiT);
        },
        py::arg("sys"), py::arg("tg"), py::arg("u0"), py::arg("v"),
        py::arg("phiT"));

    m.def(
        "gramian_apply",
        [](const SemidiscreteSystem& sys, const TimeGrid& tg,
           const std::vector<double>& phiT) {
            return to_array(gramian_apply(sys, tg, phiT));
        },
        py::arg("sys"), py::arg("tg"), py::arg("phiT"));

    py::class_<HumResult>(m, "HumResult")
        .def_property_readonly(
            "phiT_hat", [](const HumResult& r) { return to_array(r.phiT_hat); })
        .def_property_readonly(
            "v", [](const HumResult& r) { return to_array(r.v.values); })
        .def_readonly("terminal_norm", &HumResult::terminal_norm)
        .def_readonly("control_norm", &HumResult::control_norm)
        .def_readonly("cg_iterations", &HumResult::cg_iterations)
        .def_readonly("beta", &HumResult::beta)
        .def_readonly("converged", &HumResult::converged);

    m.def("compute_null_control", &compute_null_control, py::arg("sys"),
          py::arg("tg"), py::arg("u0"), py::arg("beta"),
          py::arg("tol") = 1e-10, py::arg("max_iter") = 2000);
    m.def("verify_optimality", &verify_optimality, py::arg("result"),
          py::arg("sys"), py::arg("tg"), py::arg("u0"),
          py::arg("basis_stride") = 1);

    py::enum_<ObsProblem>(m, "ObsProblem")
        .value("adjoint", ObsProblem::adjoint)
        .value("direct", ObsProblem::direct);
    py::enum_<EigMethod>(m, "EigMethod")
        .value("dense", EigMethod::dense)
        .value("power", EigMethod::power_iteration);

    py::class_<ObsConfig>(m, "ObsConfig")
        .def(py::init([](ObsProblem problem, Boundary obs_node, double delta) {
                 return ObsConfig{problem, obs_node, delta};
             }),
             py::arg("problem") = ObsProblem::adjoint,
             py::arg("obs_node") = Boundary::gamma0_right,
             py::arg("delta") = -1.0)
        .def_readwrite("problem", &ObsConfig::problem)
        .def_readwrite("obs_node", &ObsConfig::obs_node)
        .def_readwrite("delta", &ObsConfig::delta);

    m.def(
        "assemble_quadratic_forms",
        [](const SemidiscreteSystem& sys, const TimeGrid& tg,
           const ObsConfig& cfg, int dense_cap) {
            const QuadraticForms forms =
                assemble_quadratic_forms(sys, tg, cfg, dense_cap);
            return py::make_tuple(forms.g_init, forms.g_trace);
        },
        py::arg("sys"), py::arg("tg"), py::arg("cfg"),
        py::arg("dense_cap") = 257);
    m.def(
        "observability_constant_from_forms",
        [](const Eigen::MatrixXd& g_init, const Eigen::MatrixXd& g_trace,
           double delta, EigMethod method) {
            return observability_constant_from_forms({g_init, g_trace}, delta,
                                                     method);
        },
        py::arg("g_init"), py::arg("g_trace"), py::arg("delta") = -1.0,
        py::arg("method") = EigMethod::dense);
    m.def("observability_constant", &observability_constant, py::arg("sys"),
          py::arg("tg"), py::arg("cfg"), py::arg("method") = EigMethod::dense,
          py::arg("dense_cap") = 257);
    m.def(
        "illposedness_sweep",
        [](const PhysParams& params, const std::vector<int>& nx_list,
           const ObsConfig& cfg, double theta, int nt_per_nx) {
            py::list out;
            for (const SweepPoint& p :
                 illposedness_sweep(params, nx_list, cfg, theta, nt_per_nx))
                out.append(py::make_tuple(p.nx, p.kappa));
            return out;
        },
        py::arg("params"), py::arg("nx_list"), py::arg("cfg"),
        py::arg("theta") = 1.0, py::arg("nt_per_nx") = 25);

    py::class_<CarlemanWeights>(m, "CarlemanWeights")
        .def_static("make", &CarlemanWeights::make, py::arg("params"),
                    py::arg("s"), py::arg("cshift") = -1.0)
        .def_readonly("s", &CarlemanWeights::s)
        .def_readonly("cshift", &CarlemanWeights::Cshift)
        .def("eta", &CarlemanWeights::eta)
        .def("alpha", &CarlemanWeights::alpha)
        .def("phi_w", &CarlemanWeights::phi_w);

    m.def(
        "eval_weights",
        [](const CarlemanWeights& w, double t, double x) {
            const WeightValues v = eval_weights(w, t, x);
            return py::make_tuple(v.eta, v.alpha, v.phi_w);
        },
        py::arg("w"), py::arg("t"), py::arg("x"));

    py::class_<WeightIdentityReport>(m, "WeightIdentityReport")
        .def_readonly("max_rel_alpha_x", &WeightIdentityReport::max_rel_alpha_x)
        .def_readonly("max_rel_alpha_xx", &WeightIdentityReport::max_rel_alpha_xx)
        .def_readonly("max_ratio_alpha_t", &WeightIdentityReport::max_ratio_alpha_t)
        .def_readonly("max_ratio_alpha_xt",
                      &WeightIdentityReport::max_ratio_alpha_xt)
        .def_readonly("max_ratio_alpha_tt",
                      &WeightIdentityReport::max_ratio_alpha_tt);
    m.def("check_weight_identities", &check_weight_identities, py::arg("w"),
          py::arg("x_samples") = 41, py::arg("t_samples") = 33,
          py::arg("fd_h") = 1e-3);
    m.def("s_threshold", &s_threshold, py::arg("params"), py::arg("sigma"));
    m.def("s_threshold_scaled", &s_threshold_scaled, py::arg("params"),
          py::arg("sigma"));

    py::class_<CarlemanRatio>(m, "CarlemanRatio")
        .def_readonly("lhs", &CarlemanRatio::lhs)
        .def_readonly("rhs", &CarlemanRatio::rhs)
        .def_readonly("ratio", &CarlemanRatio::ratio)
        .def_readonly("rhs_underflow", &CarlemanRatio::rhs_underflow)
        .def_readonly("rhs_overflow", &CarlemanRatio::rhs_overflow)
        .def_readonly("zero_over_zero", &CarlemanRatio::zero_over_zero);
    m.def(
        "inequality_ratio",
        [](const CarlemanWeights& w,
           py::array_t<double, py::array::c_style> phi, const Grid1D& grid,
           const TimeGrid& tg) {
            return inequality_ratio(w, field_from_array(phi), grid, tg);
        },
        py::arg("w"), py::arg("phi_history"), py::arg("grid"), py::arg("tg"));

    py::class_<LabConfig>(m, "LabConfig")
        .def(py::init<>())
        .def_readwrite("phys", &LabConfig::phys)
        .def_readwrite("nx", &LabConfig::nx)
        .def_readwrite("nt", &LabConfig::nt)
        .def_readwrite("theta", &LabConfig::theta)
        .def_readwrite("beta", &LabConfig::beta)
        .def_readwrite("sigma", &LabConfig::sigma)
        .def_readwrite("delta", &LabConfig::delta)
        .def_readwrite("seed", &LabConfig::seed)
        .def_readwrite("jobs", &LabConfig::jobs);

    m.def(
        "run_dissipation",
        [](const LabConfig& cfg, double t1, double t2, int trials, double slack) {
            py::list out;
            for (const auto& r : run_dissipation(cfg, t1, t2, trials, slack))
                out.append(py::make_tuple(r.trial, r.norm_t1, r.norm_t2,
                                          r.bound_factor, r.satisfied));
            return out;
        },
        py::arg("cfg"), py::arg("t1"), py::arg("t2"), py::arg("trials"),
        py::arg("slack") = 1.05);
    m.def(
        "run_cost_sweep",
        [](const LabConfig& cfg, const std::vector<double>& eps_list, double beta,
           int nx_base) {
            py::list out;
            for (const auto& r : run_cost_sweep(cfg, eps_list, beta, nx_base))
                out.append(py::make_tuple(r.eps, r.nx, r.nt, r.c_obs,
                                          r.control_ratio, r.terminal_norm,
                                          r.peclet_ok));
            return out;
        },
        py::arg("cfg"), py::arg("eps_list"), py::arg("beta"),
        py::arg("nx_base") = 48);
    m.def(
        "run_illposed",
        [](const LabConfig& cfg, const std::vector<int>& nx_list, int nt_per_nx) {
            py::list out;
            for (const auto& r : run_illposed(cfg, nx_list, nt_per_nx))
                out.append(
                    py::make_tuple(r.nx, r.kappa_direct_g1, r.kappa_adjoint_g0));
            return out;
        },
        py::arg("cfg"), py::arg("nx_list"), py::arg("nt_per_nx") = 25);
    m.def(
        "run_carleman_report",
        [](const LabConfig& cfg, double sigma, int trials, double cshift) {
            const CarlemanReport rep =
                run_carleman_report(cfg, sigma, trials, cshift);
            py::list rows;
            for (const auto& r : rep.rows)
                rows.append(py::make_tuple(r.trial, r.lhs, r.rhs, r.ratio));
            py::dict out;
            out["s"] = rep.s;
            out["cshift"] = rep.cshift;
            out["identities"] = rep.identities;
            out["rows"] = rows;
            return out;
        },
        py::arg("cfg"), py::arg("sigma"), py::arg("trials"),
        py::arg("cshift") = -1.0);

    m.attr("__version__") = "0.1.0";
    m.attr("build_id") = build_id();
}
