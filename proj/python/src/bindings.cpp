#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracpoh/errors.hpp"
#include "fracpoh/fraclap.hpp"
#include "fracpoh/pohozaev.hpp"
#include "fracpoh/scalingop.hpp"
#include "fracpoh/solver.hpp"
#include "fracpoh/specfun.hpp"
#include "fracpoh/trace.hpp"

namespace py = pybind11;
using namespace fracpoh;

namespace {

py::dict trace_dict(const trace::TraceFit& t) {
    py::dict d;
    d["boundary_point"] = t.boundary_point;
    d["q_value"] = t.q_value;
    d["fit_order"] = t.fit_order;
    d["residual"] = t.residual;
    return d;
}

py::dict solution_dict(const solver::Solution& sol) {
    py::dict d;
    d["x"] = Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(sol.grid.nodes.data(),
                                                                static_cast<Eigen::Index>(sol.grid.size())));
    d["u"] = Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(sol.grid.values.data(),
                                                                static_cast<Eigen::Index>(sol.grid.size())));
    d["s"] = sol.s;
    d["newton_iterations"] = sol.newton_iterations;
    d["final_residual"] = sol.final_residual;
    if (sol.has_traces) {
        d["trace_a"] = trace_dict(sol.trace_a);
        d["trace_b"] = trace_dict(sol.trace_b);
    } else {
        d["trace_a"] = py::none();
        d["trace_b"] = py::none();
    }
    return d;
}

py::dict pohozaev_dict(const pohozaev::PohozaevReport& r) {
    py::dict d;
    d["s"] = r.s;
    d["n"] = r.n;
    d["term_ufu"] = r.term_ufu;
    d["term_F"] = r.term_F;
    d["term_Fx"] = r.term_Fx;
    d["boundary_sum"] = r.boundary_sum;
    d["lhs"] = r.lhs;
    d["rhs"] = r.rhs;
    d["abs_residual"] = r.abs_residual;
    d["rel_residual"] = r.rel_residual;
    return d;
}

fraclap::PointFunction wrap_callable(py::function f, double a, double b, double boundary_exponent,
                                     std::vector<double> breakpoints) {
    fraclap::PointFunction u;
    u.a = a;
    u.b = b;
    u.boundary_exponent = boundary_exponent;
    u.breakpoints = std::move(breakpoints);
    u.evaluator = [f](double x) { return f(x).cast<double>(); };
    return u;
}

solver::SolveConfig make_config(std::size_t N, double init_scale, std::size_t max_iter, double damping,
                                double newton_tol) {
    solver::SolveConfig c;
    c.N = N;
    c.init_scale = init_scale;
    c.max_iter = max_iter;
    c.damping = damping;
    c.newton_tol = newton_tol;
    return c;
}

}  // namespace

PYBIND11_MODULE(_fracpoh, m) {
    m.doc() = "Fractional Laplacian, boundary traces and Pohozaev identity checks";

    auto base = py::register_exception<Error>(m, "FracpohError", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<NonconvergenceError>(m, "NonconvergenceError", base.ptr());
    py::register_exception<LinearAlgebraError>(m, "LinearAlgebraError", base.ptr());
    py::register_exception<ExtractionError>(m, "ExtractionError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

    // special functions
    m.def("gamma", &specfun::gamma, py::arg("x"));
    m.def("digamma", &specfun::digamma, py::arg("x"));
    m.def("dilog", &specfun::dilog, py::arg("t"));
    m.def("hyp2f1", &specfun::hyp2f1, py::arg("a"), py::arg("b"), py::arg("c"), py::arg("z"));
    m.def("hyp2f1_unit_by_quadrature", &specfun::hyp2f1_unit_by_quadrature, py::arg("a"), py::arg("b"),
          py::arg("c"), py::arg("tol") = 1e-13);
    m.def(
        "hyp2f1_endpoint_limit",
        [](double s) {
            const auto e = specfun::hyp2f1_endpoint_limit(s);
            return py::make_tuple(e.value, e.error);
        },
        py::arg("s"), "Extrapolated limit and its error estimate.");
    m.def("frac_lap_normalization", &specfun::frac_lap_normalization, py::arg("n"), py::arg("s"));
    m.def(
        "constants",
        [](double s) {
            const auto c = specfun::frac_constants(s);
            py::dict d;
            d["s"] = c.s;
            d["c1"] = c.c1;
            d["c2"] = c.c2;
            d["c3"] = c.c3;
            d["c_ns_1d_s"] = c.c_ns_1d_s;
            d["c_ns_1d_half_s"] = c.c_ns_1d_half_s;
            return d;
        },
        py::arg("s"));
    m.def("c2_by_quadrature", &specfun::c2_by_quadrature, py::arg("s"), py::arg("tol") = 1e-12);

    // pointwise operator
    m.def(
        "frac_lap_point",
        [](py::function f, double s, double x, double a, double b, double boundary_exponent,
           std::vector<double> breakpoints) {
            const auto u = wrap_callable(std::move(f), a, b, boundary_exponent, std::move(breakpoints));
            return fraclap::frac_lap_point(u, s, x);
        },
        py::arg("f"), py::arg("s"), py::arg("x"), py::arg("a"), py::arg("b"), py::arg("boundary_exponent") = 1.0,
        py::arg("breakpoints") = std::vector<double>{},
        "(-Delta)^s f at x for f supported on (a, b) with f ~ delta^boundary_exponent at the ends.");
    m.def(
        "frac_lap_ball",
        [](double s, double x) { return fraclap::frac_lap_point(solver::explicit_ball_solution(1, s), s, x); },
        py::arg("s"), py::arg("x"), "(-Delta)^s of the explicit solution on (-1, 1); equals 1 inside.");
    m.def("ball_coefficient", &solver::ball_coefficient, py::arg("n"), py::arg("s"));
    m.def(
        "explicit_ball_solution",
        [](int n, double s, double r, double rho) { return solver::explicit_ball_solution(n, s, r)(rho); },
        py::arg("n"), py::arg("s"), py::arg("r"), py::arg("rho"));
    m.def("half_lap_trunc_phi", &fraclap::half_lap_trunc_phi, py::arg("rho0"), py::arg("s"), py::arg("x"));

    // matrix and solvers
    m.def(
        "assemble_matrix",
        [](std::size_t N, double s, double grading) {
            const auto g = fraclap::make_graded_grid(-1.0, 1.0, N, grading);
            const auto M = fraclap::assemble_matrix(g, s);
            Eigen::VectorXd nodes = Eigen::Map<const Eigen::VectorXd>(M.nodes.data(),
                                                                       static_cast<Eigen::Index>(M.nodes.size()));
            return py::make_tuple(M.stiffness, M.lumped_mass, nodes);
        },
        py::arg("N"), py::arg("s"), py::arg("grading") = 2.0,
        "Stiffness K, lumped mass m and all nodes of the graded grid on (-1, 1).");
    m.def(
        "solve_linear",
        [](std::size_t N, double s, double rhs) {
            const auto g = fraclap::make_graded_grid(-1.0, 1.0, N);
            return solution_dict(solver::solve_linear([rhs](double) { return rhs; }, g, s));
        },
        py::arg("N"), py::arg("s"), py::arg("rhs") = 1.0);
    m.def(
        "solve_semilinear",
        [](const std::string& spec, double s, std::size_t N, double init_scale, std::size_t max_iter,
           double damping, double newton_tol) {
            const auto p = solver::make_problem(spec, s);
            return solution_dict(solver::solve_semilinear(p, make_config(N, init_scale, max_iter, damping, newton_tol)));
        },
        py::arg("spec"), py::arg("s"), py::arg("N") = 1024, py::arg("init_scale") = 10.0, py::arg("max_iter") = 50,
        py::arg("damping") = 1.0, py::arg("newton_tol") = 1e-8);
    m.def(
        "extract_trace",
        [](std::vector<double> x, std::vector<double> u, double s, double boundary_point) {
            fraclap::GridFunction1D g;
            g.a = x.front();
            g.b = x.back();
            g.nodes = std::move(x);
            g.values = std::move(u);
            return trace_dict(trace::extract_trace(g, s, boundary_point));
        },
        py::arg("x"), py::arg("u"), py::arg("s"), py::arg("boundary_point"));

    // identities
    m.def(
        "pohozaev_check",
        [](const std::string& spec, double s, std::size_t N, double init_scale) {
            const auto p = solver::make_problem(spec, s);
            const auto sol = solver::solve_semilinear(p, make_config(N, init_scale, 50, 1.0, 1e-8));
            return pohozaev_dict(p.F_x ? pohozaev::check_identity_x(sol, p) : pohozaev::check_identity(sol, p));
        },
        py::arg("spec"), py::arg("s"), py::arg("N") = 1024, py::arg("init_scale") = 10.0);
    m.def(
        "classify",
        [](const std::string& spec, double s, double lo, double hi) {
            const auto v = pohozaev::classify_nonlinearity(solver::make_problem(spec, s), lo, hi);
            return pohozaev::to_string(v.classification);
        },
        py::arg("spec"), py::arg("s"), py::arg("lo") = 0.0, py::arg("hi") = 2.0);

    // log-jump structure and scaling
    m.def(
        "fit_log_jump_distance",
        [](double s) {
            const auto d0 = fraclap::distance_power(-1.0, 1.0, s);
            const auto f = trace::fit_log_jump([&](double x) { return fraclap::frac_lap_point(d0, s / 2.0, x); },
                                               s, 1.0, -1.0, 1.0);
            py::dict d;
            d["c_log"] = f.c_log;
            d["offset_in"] = f.offset_in;
            d["offset_out"] = f.offset_out;
            d["jump"] = f.jump();
            d["amplitude"] = f.amplitude;
            d["residual"] = f.residual;
            return d;
        },
        py::arg("s"), "Log-jump fit of (-Delta)^{s/2} delta^s at the end x = 1 of (-1, 1).");
    m.def(
        "frak_i",
        [](double A, double B) {
            scalingop::LogJumpProfile w;
            w.A = A;
            w.B = B;
            const auto e = scalingop::frak_i_estimate(w);
            py::dict d;
            d["value"] = e.value;
            d["lambda_ladder"] = e.lambda_ladder;
            d["raw_quotients"] = e.raw_quotients;
            d["extrapolation_error"] = e.extrapolation_error;
            return d;
        },
        py::arg("A"), py::arg("B"));
    m.def("i_lambda_log_closed", &scalingop::i_lambda_log_closed, py::arg("lam"),
          "Closed form of I_lambda - I_1 for the pure log profile, lambda in (1, 2).");
    m.def(
        "i_lambda_log",
        [](double lam) {
            scalingop::LogJumpProfile w;
            w.A = 1.0;
            return scalingop::i_lambda(w, lam);
        },
        py::arg("lam"), "I_lambda for the pure log profile by quadrature.");
}
