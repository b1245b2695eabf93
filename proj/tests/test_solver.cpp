#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fracpoh/errors.hpp"
#include "fracpoh/fraclap.hpp"
#include "fracpoh/solver.hpp"

using namespace fracpoh;

namespace {

double kappa(double s) {
    return std::pow(2.0, -2.0 * s) * std::tgamma(0.5) / (std::tgamma(0.5 + s) * std::tgamma(1.0 + s));
}

double oracle_error(const solver::Solution& sol, double s) {
    double e = 0.0;
    const auto& g = sol.grid;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double x = g.nodes[j];
        e = std::max(e, std::abs(g.values[j] - kappa(s) * std::pow(std::max(0.0, (1.0 - x) * (1.0 + x)), s)));
    }
    return e;
}

}  // namespace

TEST_CASE("radial coefficient") {
    CHECK(solver::ball_coefficient(1, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
    // n = 3: 2^{-2s} Gamma(3/2) / (Gamma(3/2 + s) Gamma(1 + s))
    const double s = 0.3;
    CHECK(solver::ball_coefficient(3, s) ==
          doctest::Approx(std::pow(2.0, -2 * s) * std::tgamma(1.5) / (std::tgamma(1.5 + s) * std::tgamma(1.0 + s)))
              .epsilon(1e-13));
    const auto u = solver::explicit_ball_solution(1, s, 2.0);
    CHECK(u(0.0) == doctest::Approx(kappa(s) * std::pow(4.0, s)).epsilon(1e-13));
    CHECK(u(2.5) == 0.0);
    CHECK_THROWS_AS(solver::ball_coefficient(0, s), DomainError);
}

TEST_CASE("linear solve converges to the explicit solution") {
    for (double s : {0.3, 0.5, 0.7}) {
        double prev = 1e300;
        for (std::size_t N : {128, 256, 512, 1024}) {
            const auto sol = solver::solve_linear([](double) { return 1.0; }, fraclap::make_graded_grid(-1, 1, N), s);
            const double e = oracle_error(sol, s);
            CHECK(e < prev);
            prev = e;
        }
        CHECK(prev < 1e-2);
    }
}

TEST_CASE("discrete maximum principle") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto g = fraclap::make_graded_grid(-1.0, 1.0, 256);
    for (double s : {0.2, 0.8}) {
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(g.size() - 2));
        for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] = u(rng) < 0.7 ? 0.0 : u(rng);
        const auto sol = solver::solve_linear(rhs, g, s);
        for (double v : sol.grid.values) CHECK(v >= 0.0);
    }
}

TEST_CASE("even data give even solutions") {
    const auto g = fraclap::make_graded_grid(-1.0, 1.0, 200);
    const auto sol = solver::solve_linear([](double x) { return 1.0 + x * x; }, g, 0.45);
    const auto& v = sol.grid.values;
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    for (std::size_t j = 0; j < v.size(); ++j) CHECK(std::abs(v[j] - v[v.size() - 1 - j]) <= 1e-12 * m);
}

TEST_CASE("problem parsing") {
    const auto c = solver::make_problem("const:c=2", 0.5);
    CHECK(c.f(0.3, 5.0) == 2.0);
    CHECK(c.F(0.3, 5.0) == doctest::Approx(10.0));
    const auto p = solver::make_problem("power:p=3,c=0.5", 0.5);
    CHECK(p.f(0.0, 2.0) == doctest::Approx(4.0));
    CHECK(p.F(0.0, 2.0) == doctest::Approx(2.0));
    CHECK(p.odd_in_u);
    const auto a = solver::make_problem("affine:eps=0.2", 0.5);
    CHECK(a.f(0.5, 1.0) == doctest::Approx(1.1));
    REQUIRE(a.F_x);
    CHECK(a.F_x(0.5, 3.0) == doctest::Approx(0.6));
    const auto xp = solver::make_problem("xpower:p=2,eps=0.1", 0.5);
    xp.validate();
    CHECK(xp.f(-1.0, 2.0) == doctest::Approx(0.9 * 4.0));

    CHECK_THROWS_AS(solver::make_problem("cubic", 0.5), ConfigError);
    CHECK_THROWS_AS(solver::make_problem("power:q=2", 0.5), ConfigError);
    CHECK_THROWS_AS(solver::make_problem("power:p=abc", 0.5), ConfigError);
    CHECK_THROWS_AS(solver::make_problem("power:p=0.5", 0.5), ConfigError);
    CHECK_THROWS_AS(solver::make_problem("xpower:p=2", 0.5), ConfigError);
}

TEST_CASE("problem validation") {
    auto p = solver::make_problem("power:p=2", 0.5);
    p.validate();
    p.F = [](double, double u) { return u * u * u; };  // wrong primitive
    CHECK_THROWS_AS(p.validate(), ValidationError);
    auto q = solver::make_problem("affine:eps=0.3", 0.5);
    q.F_x = [](double, double u) { return 2.0 * u; };
    CHECK_THROWS_AS(q.validate(), ValidationError);
    auto r = solver::make_problem("const", 0.5);
    r.s = 1.0;
    CHECK_THROWS_AS(r.validate(), ValidationError);
}

TEST_CASE("Newton on u^2") {
    const double s = 0.75;
    solver::SolveConfig cfg;
    cfg.N = 256;
    cfg.init_scale = 10.0;
    const auto sol = solver::solve_semilinear(solver::make_problem("power:p=2", s), cfg);
    CHECK(sol.newton_iterations <= 20);
    CHECK(sol.final_residual <= cfg.newton_tol);
    CHECK(sol.has_traces);
    // Nontrivial and positive.
    double mx = 0.0;
    for (double v : sol.grid.values) {
        CHECK(v >= -1e-12);
        mx = std::max(mx, v);
    }
    CHECK(mx > 1.0);

    // Reusing the assembled matrix gives the same answer.
    const auto again = solver::solve_semilinear(solver::make_problem("power:p=2", s), cfg, sol.matrix);
    CHECK(again.grid.values == sol.grid.values);
}

TEST_CASE("constant source matches the linear solve") {
    solver::SolveConfig cfg;
    cfg.N = 128;
    const auto g = fraclap::make_graded_grid(-1.0, 1.0, 128);
    const auto lin = solver::solve_linear([](double) { return 1.0; }, g, 0.4);
    const auto nl = solver::solve_semilinear(solver::make_problem("const", 0.4), cfg);
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(nl.grid.values[j] == doctest::Approx(lin.grid.values[j]).epsilon(1e-10));
}

TEST_CASE("nonconvergence carries the last iterate") {
    solver::SolveConfig cfg;
    cfg.N = 128;
    cfg.init_scale = 10.0;
    cfg.max_iter = 1;
    try {
        solver::solve_semilinear(solver::make_problem("power:p=2", 0.75), cfg);
        FAIL("expected NonconvergenceError");
    } catch (const NonconvergenceError& e) {
        CHECK(e.last_residual() > cfg.newton_tol);
    }
    cfg.damping = 0.0;
    CHECK_THROWS_AS(solver::solve_semilinear(solver::make_problem("const", 0.5), cfg), DomainError);
}

TEST_CASE("given initial iterate") {
    solver::SolveConfig cfg;
    cfg.N = 64;
    cfg.init = solver::InitKind::given;
    cfg.initial = Eigen::VectorXd::Zero(10);
    CHECK_THROWS_AS(solver::solve_semilinear(solver::make_problem("const", 0.5), cfg), DomainError);
    // u = 0 is a solution of f = u^2 and Newton stays there.
    cfg.initial = Eigen::VectorXd::Zero(63);
    const auto sol = solver::solve_semilinear(solver::make_problem("power:p=2", 0.5), cfg);
    for (double v : sol.grid.values) CHECK(v == 0.0);
}

TEST_CASE("solution csv") {
    const auto sol = solver::solve_linear([](double) { return 1.0; }, fraclap::make_graded_grid(-1, 1, 16), 0.5);
    std::ostringstream os;
    solver::write_solution_csv(sol, os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,u");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 17);
}
