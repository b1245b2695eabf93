#include <doctest.h>

#include <cmath>

#include "fracpoh/errors.hpp"
#include "fracpoh/fraclap.hpp"
#include "fracpoh/solver.hpp"
#include "fracpoh/trace.hpp"

using namespace fracpoh;

namespace {

double kappa(double s) {
    return std::pow(2.0, -2.0 * s) * std::tgamma(0.5) / (std::tgamma(0.5 + s) * std::tgamma(1.0 + s));
}

fraclap::PointFunction ball(double s) {
    fraclap::PointFunction u;
    u.boundary_exponent = s;
    const double k = kappa(s);
    u.evaluator = [s, k](double x) { return k * std::pow((1.0 - x) * (1.0 + x), s); };
    return u;
}

}  // namespace

TEST_CASE("synthetic ratio ladder") {
    std::vector<double> d, r;
    for (int k = 0; k < 10; ++k) {
        d.push_back(0.1 * std::pow(0.5, k));
        r.push_back(1.7 - 0.4 * std::pow(d.back(), 0.3));
    }
    const auto fit = trace::fit_ratio_limit(d, r, 1.0);
    CHECK(fit.q_value == doctest::Approx(1.7).epsilon(1e-9));
    CHECK(fit.alpha == doctest::Approx(0.3));
    CHECK(fit.residual < 1e-10);
    CHECK_THROWS_AS(trace::fit_ratio_limit({0.1, 0.05, 0.025}, {1.0, 1.0, 1.0}, 1.0), ExtractionError);
}

TEST_CASE("synthetic log-jump samples") {
    std::vector<double> d, in, out;
    for (int k = 0; k < 10; ++k) {
        const double x = 0.1 * std::pow(0.5, k);
        d.push_back(x);
        in.push_back(0.8 * std::log(x) + 1.25 + 0.3 * std::sqrt(x));
        out.push_back(0.8 * std::log(x) - 0.5 - 0.2 * std::sqrt(x));
    }
    const auto fit = trace::fit_log_jump_samples(d, in, out, 0.5, 1.0);
    CHECK(fit.c_log == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(fit.offset_in == doctest::Approx(1.25).epsilon(1e-9));
    CHECK(fit.offset_out == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(fit.jump() == doctest::Approx(1.75).epsilon(1e-9));
    CHECK_THROWS_AS(trace::fit_log_jump_samples({0.1, 0.05}, {1.0, 1.0}, {1.0, 1.0}, 0.5, 1.0), ExtractionError);
}

TEST_CASE("trace of the explicit solution") {
    for (double s : {0.2, 0.5, 0.8}) {
        const double q = kappa(s) * std::pow(2.0, s);
        const auto u = ball(s);
        const auto fb = trace::extract_trace(u, s, 1.0);
        const auto fa = trace::extract_trace(u, s, -1.0);
        // One corrector term leaves the delta^2 part of (2 - delta)^s unmodelled.
        CHECK(fb.q_value == doctest::Approx(q).epsilon(5e-5));
        CHECK(std::abs(fa.q_value - fb.q_value) <= fa.residual + fb.residual + 1e-12);
    }
}

TEST_CASE("trace from nodal values") {
    const double s = 0.6;
    const auto g = fraclap::sample(ball(s), fraclap::make_graded_grid(-1.0, 1.0, 1024));
    const auto fit = trace::extract_trace(g, s, 1.0);
    CHECK(fit.q_value == doctest::Approx(kappa(s) * std::pow(2.0, s)).epsilon(1e-4));
    CHECK_THROWS_AS(trace::extract_trace(g, s, 0.5), DomainError);
    CHECK_THROWS_AS(trace::extract_trace(g, 1.5, 1.0), DomainError);
}

TEST_CASE("wrong exponent is detected") {
    // u ~ delta^0.3 analysed with s = 0.7: ratios blow up toward the boundary.
    CHECK_THROWS_AS(trace::extract_trace(fraclap::distance_power(-1.0, 1.0, 0.3), 0.7, 1.0), ExtractionError);
}

TEST_CASE("discrete solution: positivity and mirror symmetry") {
    for (double s : {0.3, 0.7}) {
        solver::SolveConfig cfg;
        cfg.N = 512;
        const auto sol = solver::solve_semilinear(solver::make_problem("const", s), cfg);
        REQUIRE(sol.has_traces);
        CHECK(sol.trace_a.q_value > 0.0);
        CHECK(sol.trace_b.q_value > 0.0);
        CHECK(std::abs(sol.trace_a.q_value - sol.trace_b.q_value) <=
              sol.trace_a.residual + sol.trace_b.residual + 1e-10);
    }
}

TEST_CASE("log amplitude of the half-order image matches the trace") {
    for (double s : {0.3, 0.5, 0.7}) {
        const auto u = ball(s);
        const double q = trace::extract_trace(u, s, 1.0).q_value;
        const auto fit = trace::fit_log_jump([&](double x) { return fraclap::frac_lap_point(u, s / 2.0, x); }, s, 1.0,
                                             -1.0, 1.0);
        CHECK(std::abs(fit.amplitude / q - 1.0) < 5e-2);
    }
}

TEST_CASE("log-jump argument checks") {
    auto w = [](double) { return 0.0; };
    CHECK_THROWS_AS(trace::fit_log_jump(w, 0.5, 1.0, -1.0, 1.0, 4), DomainError);
    CHECK_THROWS_AS(trace::fit_log_jump(w, 0.5, 0.3, -1.0, 1.0), DomainError);
    CHECK_THROWS_AS(trace::fit_log_jump(w, 0.5, 1.0, -1.0, 1.0, 10, 1.5), DomainError);
}
