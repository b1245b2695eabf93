#include <doctest.h>

#include <cmath>

#include "fracpoh/errors.hpp"
#include "fracpoh/fraclap.hpp"
#include "fracpoh/pohozaev.hpp"
#include "fracpoh/scalingop.hpp"
#include "fracpoh/solver.hpp"

using namespace fracpoh;

namespace {

const double kPi = 3.14159265358979323846;

double kappa(double s) {
    return std::pow(2.0, -2.0 * s) * std::tgamma(0.5) / (std::tgamma(0.5 + s) * std::tgamma(1.0 + s));
}

// Solution of (-Delta)^s u = c on (-r, r): c kappa (r^2 - x^2)^s.
fraclap::PointFunction scaled_ball(double s, double r, double c) {
    fraclap::PointFunction u;
    u.a = -r;
    u.b = r;
    u.boundary_exponent = s;
    const double k = c * kappa(s);
    u.evaluator = [s, r, k](double x) { return k * std::pow((r - x) * (r + x), s); };
    u.derivative = [s, r, k](double x) { return -2.0 * s * k * x * std::pow((r - x) * (r + x), s - 1.0); };
    return u;
}

solver::Solution solve(const std::string& spec, double s, std::size_t N, double init = 1.0) {
    solver::SolveConfig cfg;
    cfg.N = N;
    cfg.init_scale = init;
    return solver::solve_semilinear(solver::make_problem(spec, s), cfg);
}

}  // namespace

TEST_CASE("report reconstruction is exact") {
    const auto r = pohozaev::finish_report(0.3, 1, 1.25, -0.5, 0.125, 2.0);
    CHECK(r.lhs == (2.0 * 0.3 - 1.0) * 1.25 + 2.0 * 1.0 * -0.5 + 2.0 * 0.125);
    CHECK(r.abs_residual == std::abs(r.lhs - r.rhs));
    CHECK(r.rel_residual == r.abs_residual / std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-14}));
    const double g2 = std::pow(std::tgamma(1.3), 2);
    CHECK(std::abs(r.rhs / r.boundary_sum - g2) <= 1e-12 * g2);
    const auto z = pohozaev::finish_report(0.5, 1, 0, 0, 0, 0);
    CHECK(z.rel_residual == 0.0);
}

TEST_CASE("analytic identity for constant sources") {
    for (double s : {0.2, 0.5, 0.8}) {
        const auto problem = solver::make_problem("const", s);
        const double q = kappa(s) * std::pow(2.0, s);
        const auto rep = pohozaev::check_identity(scaled_ball(s, 1.0, 1.0), q, q, problem);
        CHECK(rep.rel_residual < 1e-8);
        const double g2 = std::pow(std::tgamma(1.0 + s), 2);
        CHECK(std::abs(rep.rhs / rep.boundary_sum - g2) <= 1e-12 * g2);
        CHECK(rep.boundary_sum == doctest::Approx(2.0 * q * q).epsilon(1e-14));
    }
}

TEST_CASE("both sides scale together") {
    const double s = 0.4, r = 2.0;
    const double q1 = kappa(s) * std::pow(2.0, s);
    const auto base = pohozaev::check_identity(scaled_ball(s, 1.0, 1.0), q1, q1, solver::make_problem("const", s));
    // u(x / r) solves the problem with source r^{-2s} on (-r, r).
    const double c = std::pow(r, -2.0 * s);
    const double qr = q1 * std::pow(r, -s);
    auto big = scaled_ball(s, r, c);
    const auto rep =
        pohozaev::check_identity(big, qr, qr, solver::make_problem("const:c=" + std::to_string(c), s, -r, r));
    CHECK(std::abs(rep.lhs / base.lhs - rep.rhs / base.rhs) < 1e-6);
    // Volume terms pick up r^n from the domain and r^{-2s} from the source.
    CHECK(rep.lhs / base.lhs == doctest::Approx(std::pow(r, 1.0 - 2.0 * s)).epsilon(1e-6));
}

TEST_CASE("discrete identity: constant and affine sources") {
    for (double s : {0.25, 0.5, 0.75}) {
        const auto problem = solver::make_problem("const", s);
        CHECK(pohozaev::check_identity(solve("const", s, 1024), problem).rel_residual < 1e-3);
    }
    const auto aff = solver::make_problem("affine:eps=0.3", 0.5);
    const auto sol = solve("affine:eps=0.3", 0.5, 1024);
    const auto with_x = pohozaev::check_identity_x(sol, aff);
    CHECK(with_x.rel_residual < 1e-3);
    CHECK(with_x.term_Fx != 0.0);
    // Dropping the x-derivative term breaks the balance.
    CHECK(pohozaev::check_identity(sol, aff).rel_residual > 10.0 * with_x.rel_residual);
}

TEST_CASE("u^2 balances on the grid") {
    const auto problem = solver::make_problem("power:p=2", 0.5);
    for (std::size_t N : {256, 512}) {
        const auto rep = pohozaev::check_identity(solve("power:p=2", 0.5, N, 10.0), problem);
        CHECK(rep.rel_residual < 1e-3);
        CHECK(rep.lhs > 0.0);
    }
}

TEST_CASE("preconditions") {
    auto sol = solve("const", 0.5, 64);
    const auto problem = solver::make_problem("const", 0.5);
    sol.has_traces = false;
    CHECK_THROWS_AS(pohozaev::check_identity(sol, problem), PreconditionError);
    auto bare = problem;
    bare.F_x = nullptr;
    CHECK_THROWS_AS(pohozaev::check_identity_x(solve("const", 0.5, 64), bare), ValidationError);
    const auto off = solver::make_problem("const", 0.5, 0.5, 2.0);
    CHECK_THROWS_AS(pohozaev::check_identity(scaled_ball(0.5, 1.0, 1.0), 1.0, 1.0, off), PreconditionError);
}

TEST_CASE("bilinear identity") {
    const double s = 0.5;
    const auto u = scaled_ball(s, 1.0, 1.0);
    fraclap::PointFunction v;
    v.boundary_exponent = s;
    v.evaluator = [s](double x) { return x * std::pow((1.0 - x) * (1.0 + x), s); };
    v.derivative = [s](double x) {
        const double q = (1.0 - x) * (1.0 + x);
        return std::pow(q, s) - 2.0 * s * x * x * std::pow(q, s - 1.0);
    };
    const auto uv = pohozaev::check_bilinear(u, v, s, -1.0, 1.0);
    const auto vu = pohozaev::check_bilinear(v, u, s, -1.0, 1.0);
    CHECK(uv.residual < 1e-3);
    CHECK(uv.residual == doctest::Approx(vu.residual).epsilon(1e-9));
    // u against itself: the even case has a vanishing boundary term.
    const auto uu = pohozaev::check_bilinear(u, u, s, -1.0, 1.0);
    CHECK(uu.residual < 1e-8);
}

TEST_CASE("energy of the explicit solution") {
    for (double s : {0.3, 0.5}) {
        const auto problem = solver::make_problem("const", s);
        const double mass = kappa(s) * std::sqrt(kPi) * std::tgamma(1.0 + s) / std::tgamma(1.5 + s);
        const auto e = pohozaev::energy(scaled_ball(s, 1.0, 1.0), problem);
        CHECK(e.seminorm_sq == doctest::Approx(mass).epsilon(1e-8));
        CHECK(e.energy == doctest::Approx(-0.5 * mass).epsilon(1e-8));
        const auto d = pohozaev::energy(solve("const", s, 512), problem);
        CHECK(d.energy == doctest::Approx(-0.5 * mass).epsilon(1e-3));
    }
}

TEST_CASE("criticality classifier") {
    auto cls = [](const std::string& spec, double s) {
        return pohozaev::to_string(pohozaev::classify_nonlinearity(solver::make_problem(spec, s), 0.0, 2.0).classification);
    };
    CHECK(cls("power:p=2", 0.25) == "subcritical");
    CHECK(cls("power:p=3", 0.25) == "critical");
    CHECK(cls("power:p=4", 0.25) == "supercritical_strict");
    // Threshold (1 + 2s)/(1 - 2s) = 9 at s = 0.4.
    CHECK(cls("power:p=9", 0.4) == "critical");
    CHECK(cls("power:p=8", 0.4) == "subcritical");
    CHECK(cls("const", 0.4) == "subcritical");
    const auto v = pohozaev::classify_nonlinearity(solver::make_problem("power:p=2", 0.25), 0.0, 2.0);
    REQUIRE(v.witness.has_value());
    CHECK(*v.witness != 0.0);
    CHECK_FALSE(pohozaev::classify_nonlinearity(solver::make_problem("power:p=4", 0.25), 0.0, 2.0).witness);
}

TEST_CASE("dilation derivative of the half-order image is nonnegative") {
    // w = (-Delta)^{s/2} u for the explicit solution, even, on the half line.
    const double s = 0.5;
    const auto u = scaled_ball(s, 1.0, 1.0);
    fraclap::PointOptions po;
    po.abs_tol = po.rel_tol = 1e-11;
    fraclap::PointFunction w;
    w.a = 0.0;
    w.b = INFINITY;
    w.tail_decay = 1.0 + s;
    w.breakpoints = {1.0};
    w.evaluator = [&](double t) { return t == 1.0 ? 0.0 : fraclap::frac_lap_point(u, s / 2.0, t, po); };
    const double lam = 1.1;
    const double q = -(scalingop::i_lambda(w, lam, 1e-5) - scalingop::i_lambda(w, 1.0, 1e-5)) / (lam - 1.0);
    CHECK(q >= -1e-4);
    CHECK(q > 0.1);
}
