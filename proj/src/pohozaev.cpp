#include "fracpoh/pohozaev.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "fracpoh/errors.hpp"
#include "fracpoh/quad.hpp"
#include "fracpoh/specfun.hpp"
#include "fracpoh/trace.hpp"

namespace fracpoh::pohozaev {

namespace {

using Pointwise = std::function<double(double x, double u)>;

// int over the end cell [0, h] of g(x(delta), u1 (delta/h)^s), x(delta) = end + dir delta.
double end_cell(const Pointwise& g, double end, double dir, double h, double u1, double s) {
    auto f = [&](double d) { return g(end + dir * d, u1 * std::pow(d / h, s)); };
    const std::array<quad::SingularitySpec, 1> sp = {quad::SingularitySpec::algebraic_at(0.0, std::min(s, 0.99))};
    const double scale = std::max(std::abs(g(end + dir * h, u1)) * h, 1e-300);
    return quad::integrate_adaptive(f, 0.0, h, sp, quad::Options{1e-14 * scale, 1e-13, 1'000'000}).value;
}

// Graded-grid trapezoid rule with the delta^s model in both end cells.
double grid_integral(const fraclap::GridFunction1D& grid, double s, const Pointwise& g) {
    const auto& x = grid.nodes;
    const auto& u = grid.values;
    const std::size_t last = x.size() - 1;
    double acc = 0.0;
    for (std::size_t j = 1; j + 1 < last; ++j)
        acc += 0.5 * (x[j + 1] - x[j]) * (g(x[j], u[j]) + g(x[j + 1], u[j + 1]));
    acc += end_cell(g, grid.a, 1.0, x[1] - x[0], u[1], s);
    acc += end_cell(g, grid.b, -1.0, x[last] - x[last - 1], u[last - 1], s);
    return acc;
}

// int_{a+dmin}^{b-dmin} g, each half in the variable log(delta) so that
// delta^beta behavior at the ends becomes smooth.
double log_end_integral(const std::function<double(double)>& g, double a, double b, double dmin, double tol) {
    const double H = 0.5 * (b - a);
    const quad::Options qo{tol, tol, 2'000'000};
    auto left = [&](double v) {
        const double d = std::exp(v);
        return g(a + d) * d;
    };
    auto right = [&](double v) {
        const double d = std::exp(v);
        return g(b - d) * d;
    };
    const double lo = std::log(dmin), hi = std::log(H);
    return quad::integrate_adaptive(left, lo, hi, {}, qo).value + quad::integrate_adaptive(right, lo, hi, {}, qo).value;
}

double c3_of(double s) {
    const double g = specfun::gamma(1.0 + s);
    return g * g;
}

void check_star_shaped(double a, double b) {
    if (!(a < 0.0 && 0.0 < b)) throw PreconditionError("identity is stated for intervals with a < 0 < b");
}

PohozaevReport grid_report(const solver::Solution& sol, const solver::SemilinearProblem& problem, bool with_Fx) {
    if (!sol.has_traces) throw PreconditionError("solution carries no boundary traces");
    check_star_shaped(sol.grid.a, sol.grid.b);
    const double s = sol.s;
    const auto& f = problem.f;
    const auto& F = problem.F;
    const double t_ufu = grid_integral(sol.grid, s, [&](double x, double u) { return u * f(x, u); });
    const double t_F = grid_integral(sol.grid, s, F);
    double t_Fx = 0.0;
    if (with_Fx) {
        const auto& Fx = problem.F_x;
        t_Fx = grid_integral(sol.grid, s, [&](double x, double u) { return x * Fx(x, u); });
    }
    const double qa = sol.trace_a.q_value, qb = sol.trace_b.q_value;
    const double bsum = qb * qb * sol.grid.b - qa * qa * sol.grid.a;
    return finish_report(s, problem.n, t_ufu, t_F, t_Fx, bsum);
}

}  // namespace

PohozaevReport finish_report(double s, int n, double term_ufu, double term_F, double term_Fx, double boundary_sum) {
    PohozaevReport r;
    r.s = s;
    r.n = n;
    r.term_ufu = term_ufu;
    r.term_F = term_F;
    r.term_Fx = term_Fx;
    r.boundary_sum = boundary_sum;
    const double dn = static_cast<double>(n);
    r.lhs = (2.0 * s - dn) * term_ufu + 2.0 * dn * term_F + 2.0 * term_Fx;
    r.rhs = c3_of(s) * boundary_sum;
    r.abs_residual = std::abs(r.lhs - r.rhs);
    r.rel_residual = r.abs_residual / std::max({std::abs(r.lhs), std::abs(r.rhs), 1e-14});
    return r;
}

PohozaevReport check_identity(const solver::Solution& sol, const solver::SemilinearProblem& problem) {
    return grid_report(sol, problem, false);
}

PohozaevReport check_identity_x(const solver::Solution& sol, const solver::SemilinearProblem& problem) {
    if (!problem.F_x) throw ValidationError("check_identity_x needs F_x");
    problem.validate();
    return grid_report(sol, problem, true);
}

PohozaevReport check_identity(const fraclap::PointFunction& u, double q_a, double q_b,
                              const solver::SemilinearProblem& problem, bool with_Fx) {
    const double a = problem.a, b = problem.b;
    check_star_shaped(a, b);
    if (with_Fx && !problem.F_x) throw ValidationError("x-dependent check needs F_x");
    const double s = problem.s;
    std::vector<quad::SingularitySpec> sp = {quad::SingularitySpec::algebraic_at(a, std::min(s, 0.99)),
                                             quad::SingularitySpec::algebraic_at(b, std::min(s, 0.99))};
    for (double p : u.breakpoints)
        if (p > a && p < b) sp.push_back(quad::SingularitySpec::breakpoint_at(p));
    const quad::Options qo{1e-13, 1e-13, 1'000'000};
    auto integral = [&](const Pointwise& g) {
        return quad::integrate_adaptive([&](double x) { return g(x, u(x)); }, a, b, sp, qo).value;
    };
    const double t_ufu = integral([&](double x, double v) { return v * problem.f(x, v); });
    const double t_F = integral(problem.F);
    const double t_Fx = with_Fx ? integral([&](double x, double v) { return x * problem.F_x(x, v); }) : 0.0;
    return finish_report(s, problem.n, t_ufu, t_F, t_Fx, q_b * q_b * b - q_a * q_a * a);
}

BilinearReport check_bilinear(const fraclap::PointFunction& u, const fraclap::PointFunction& v, double s, double a,
                              double b) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    if (u.a != a || u.b != b || v.a != a || v.b != b) throw DomainError("u and v must be supported on (a, b)");
    const auto tu_a = trace::extract_trace(u, s, a), tu_b = trace::extract_trace(u, s, b);
    const auto tv_a = trace::extract_trace(v, s, a), tv_b = trace::extract_trace(v, s, b);

    // Pointwise evaluation loses digits much closer to the ends than this.
    const double dmin = 1e-4 * (b - a);
    const double tol = 1e-10;
    // int_a^b L w1 . w2' with the two end layers of width dmin taken with L frozen.
    auto term = [&](const fraclap::PointFunction& w1, const fraclap::PointFunction& w2) {
        auto g = [&](double x) { return fraclap::frac_lap_point(w1, s, x) * w2.slope(x); };
        double acc = log_end_integral(g, a, b, dmin, tol);
        acc += fraclap::frac_lap_point(w1, s, a + dmin) * w2(a + dmin);
        acc -= fraclap::frac_lap_point(w1, s, b - dmin) * w2(b - dmin);
        return acc;
    };
    const double t_uv = term(u, v);
    const double t_vu = term(v, u);
    BilinearReport r;
    r.boundary = c3_of(s) * (tu_b.q_value * tv_b.q_value - tu_a.q_value * tv_a.q_value);
    r.lhs = t_uv;
    // Polarizing the x.grad u identity over two origins puts the boundary term
    // on the right with a minus sign; written in swap-symmetric form.
    r.rhs = -t_vu - r.boundary;
    r.residual = std::abs(t_uv + t_vu + r.boundary);
    return r;
}

EnergyReport energy(const solver::Solution& sol, const solver::SemilinearProblem& problem) {
    if (!sol.matrix) throw PreconditionError("solution carries no matrix");
    const Eigen::VectorXd u = sol.grid.interior();
    EnergyReport r;
    r.seminorm_sq = u.dot(sol.matrix->stiffness * u);
    r.energy = 0.5 * r.seminorm_sq - grid_integral(sol.grid, sol.s, problem.F);
    return r;
}

EnergyReport energy(const fraclap::PointFunction& u, const solver::SemilinearProblem& problem) {
    const double a = problem.a, b = problem.b, s = problem.s;
    if (!u.compact() || u.a < a || u.b > b) throw DomainError("u must vanish outside the domain");
    EnergyReport r;
    auto g = [&](double x) {
        const double ux = u(x);
        return ux == 0.0 ? 0.0 : ux * fraclap::frac_lap_point(u, s, x);
    };
    const double dmin = 1e-4 * (u.b - u.a);
    r.seminorm_sq = log_end_integral(g, u.a, u.b, dmin, 1e-11);
    // End layers: L u frozen, u ~ delta^e.
    const double e = std::min(u.boundary_exponent, 2.0);
    r.seminorm_sq += (g(u.a + dmin) + g(u.b - dmin)) * dmin / (1.0 + e);
    std::vector<quad::SingularitySpec> sp = {quad::SingularitySpec::algebraic_at(u.a, std::min(s, 0.99)),
                                             quad::SingularitySpec::algebraic_at(u.b, std::min(s, 0.99))};
    const double iF = quad::integrate_adaptive([&](double x) { return problem.F(x, u(x)); }, u.a, u.b, sp,
                                               quad::Options{1e-13, 1e-13, 1'000'000})
                          .value;
    r.energy = 0.5 * r.seminorm_sq - iF;
    return r;
}

std::string to_string(Criticality c) {
    switch (c) {
        case Criticality::subcritical: return "subcritical";
        case Criticality::critical: return "critical";
        case Criticality::supercritical_strict: return "supercritical_strict";
    }
    return "unknown";
}

CriticalityVerdict classify_nonlinearity(const solver::SemilinearProblem& problem, double lo, double hi,
                                         std::size_t samples) {
    if (!(lo <= hi)) throw DomainError("u range must satisfy lo <= hi");
    if (samples < 2) throw DomainError("need at least 2 samples");
    const double dn = static_cast<double>(problem.n);
    const double k = (dn - 2.0 * problem.s) / 2.0;
    std::vector<double> xs;
    if (problem.F_x) {
        for (int j = 0; j <= 8; ++j) xs.push_back(problem.a + (problem.b - problem.a) * j / 8.0);
    } else {
        xs.push_back(0.5 * (problem.a + problem.b));
    }
    std::vector<double> us;
    for (std::size_t i = 0; i < samples; ++i) {
        const double u = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
        if (u == 0.0) continue;
        us.push_back(u);
        if (problem.odd_in_u) us.push_back(-u);
    }
    CriticalityVerdict v;
    v.classification = Criticality::supercritical_strict;
    bool equal_seen = false;
    for (double x : xs)
        for (double u : us) {
            const double a1 = k * u * problem.f(x, u);
            const double a2 = dn * problem.F(x, u);
            const double a3 = problem.F_x ? x * problem.F_x(x, u) : 0.0;
            const double d = a1 - a2 - a3;
            const double scale = std::max({std::abs(a1), std::abs(a2), std::abs(a3), 1e-300});
            if (std::abs(d) <= 1e-10 * scale) {
                if (!equal_seen) {
                    equal_seen = true;
                    if (v.classification != Criticality::subcritical) {
                        v.witness = u;
                        v.witness_x = x;
                    }
                }
                continue;
            }
            if (d < 0.0) {
                v.classification = Criticality::subcritical;
                v.witness = u;
                v.witness_x = x;
                return v;
            }
        }
    if (equal_seen) v.classification = Criticality::critical;
    return v;
}

}  // namespace fracpoh::pohozaev
