#include "fracpoh/solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <ostream>
#include <random>

#include "fracpoh/errors.hpp"
#include "fracpoh/specfun.hpp"

namespace fracpoh::solver {

namespace {

double sup_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Eigen::VectorXd interior_nodes(const fraclap::GridFunction1D& g) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(g.size() - 2));
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = g.nodes[static_cast<std::size_t>(i) + 1];
    return x;
}

// Very coarse grids may not resolve the boundary layer; the solution is still
// returned, just without traces.
void attach_traces(Solution& sol) {
    try {
        sol.trace_a = trace::extract_trace(sol.grid, sol.s, sol.grid.a);
        sol.trace_b = trace::extract_trace(sol.grid, sol.s, sol.grid.b);
        sol.has_traces = true;
    } catch (const ExtractionError&) {
        sol.has_traces = false;
    }
}

double parse_number(const std::string& text, const std::string& what) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v))
        throw ConfigError("nonlinearity parameter " + what + ": cannot parse '" + text + "'");
    return v;
}

// u^p for integer p, the odd extension |u|^{p-1} u otherwise.
double spow(double u, double p) {
    if (p == std::floor(p)) return std::pow(u, p);
    return std::copysign(std::pow(std::abs(u), p), u);
}

// Primitive of spow in u.
double spow_primitive(double u, double p) {
    if (p == std::floor(p)) return std::pow(u, p + 1.0) / (p + 1.0);
    return std::pow(std::abs(u), p + 1.0) / (p + 1.0);
}

bool odd_power(double p) { return p != std::floor(p) || std::fmod(std::abs(p), 2.0) == 1.0; }

}  // namespace

// ---------------------------------------------------------------- problems

double SemilinearProblem::f_u_at(double x, double u) const {
    if (f_u) return f_u(x, u);
    const double h = 1e-6 * std::max(1.0, std::abs(u));
    return (f(x, u + h) - f(x, u - h)) / (2.0 * h);
}

void SemilinearProblem::validate() const {
    if (!(s > 0.0 && s < 1.0)) throw ValidationError("s must lie in (0, 1)");
    if (n < 1) throw ValidationError("dimension must be >= 1");
    if (!(a < b)) throw ValidationError("domain must satisfy a < b");
    if (!f || !F) throw ValidationError("problem needs both f and F");
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_real_distribution<double> ux(a, b), uu(-2.0, 2.0);
    for (int k = 0; k < 16; ++k) {
        const double x = ux(rng), u = uu(rng);
        if (std::abs(F(x, 0.0)) > 1e-14) throw ValidationError("F(x, 0) must vanish");
        const double h = 1e-5 * std::max(1.0, std::abs(u));
        const double dF = (F(x, u + h) - F(x, u - h)) / (2.0 * h);
        const double fv = f(x, u);
        if (std::abs(dF - fv) > 1e-6 * std::max(1.0, std::abs(fv)))
            throw ValidationError("dF/du does not match f");
        if (F_x) {
            const double hx = 1e-5 * std::max(1.0, std::abs(x));
            const double dFx = (F(x + hx, u) - F(x - hx, u)) / (2.0 * hx);
            const double fx = F_x(x, u);
            if (std::abs(dFx - fx) > 1e-6 * std::max(1.0, std::abs(fx)))
                throw ValidationError("F_x does not match dF/dx");
        }
    }
}

SemilinearProblem make_problem(const std::string& spec, double s, double a, double b) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    std::map<std::string, double> par;
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::size_t pos = 0;
        while (pos <= rest.size()) {
            const auto comma = rest.find(',', pos);
            const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            const auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0) throw ConfigError("nonlinearity parameter '" + item + "' is not key=value");
            const std::string key = item.substr(0, eq);
            par[key] = parse_number(item.substr(eq + 1), key);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    auto take = [&](const std::string& key, double dflt, bool required) {
        auto it = par.find(key);
        if (it == par.end()) {
            if (required) throw ConfigError("nonlinearity '" + name + "' needs parameter " + key);
            return dflt;
        }
        const double v = it->second;
        par.erase(it);
        return v;
    };

    SemilinearProblem p;
    p.s = s;
    p.a = a;
    p.b = b;
    p.label = spec;
    if (name == "const") {
        const double c = take("c", 1.0, false);
        p.f = [c](double, double) { return c; };
        p.F = [c](double, double u) { return c * u; };
        p.F_x = [](double, double) { return 0.0; };
        p.f_u = [](double, double) { return 0.0; };
    } else if (name == "power") {
        const double e = take("p", 0.0, true);
        const double c = take("c", 1.0, false);
        if (!(e >= 1.0)) throw ConfigError("power nonlinearity needs p >= 1");
        p.f = [=](double, double u) { return c * spow(u, e); };
        p.F = [=](double, double u) { return c * spow_primitive(u, e); };
        p.F_x = [](double, double) { return 0.0; };
        p.f_u = [=](double, double u) {
            return c * e * (e == std::floor(e) ? std::pow(u, e - 1.0) : std::pow(std::abs(u), e - 1.0));
        };
        p.odd_in_u = odd_power(e);
    } else if (name == "affine") {
        const double eps = take("eps", 0.0, true);
        p.f = [eps](double x, double) { return 1.0 + eps * x; };
        p.F = [eps](double x, double u) { return (1.0 + eps * x) * u; };
        p.F_x = [eps](double, double u) { return eps * u; };
        p.f_u = [](double, double) { return 0.0; };
    } else if (name == "xpower") {
        const double e = take("p", 0.0, true);
        const double eps = take("eps", 0.0, true);
        if (!(e >= 1.0)) throw ConfigError("xpower nonlinearity needs p >= 1");
        p.f = [=](double x, double u) { return (1.0 + eps * x) * spow(u, e); };
        p.F = [=](double x, double u) { return (1.0 + eps * x) * spow_primitive(u, e); };
        p.F_x = [=](double, double u) { return eps * spow_primitive(u, e); };
        p.odd_in_u = odd_power(e);
    } else {
        throw ConfigError("unknown nonlinearity '" + name + "'");
    }
    if (!par.empty()) throw ConfigError("unknown parameter '" + par.begin()->first + "' for nonlinearity " + name);
    return p;
}

// ---------------------------------------------------------------- explicit solution

double ball_coefficient(int n, double s) {
    if (n < 1) throw DomainError("dimension must be >= 1");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    const double dn = static_cast<double>(n);
    return std::pow(2.0, -2.0 * s) * specfun::gamma(dn / 2.0) /
           (specfun::gamma((dn + 2.0 * s) / 2.0) * specfun::gamma(1.0 + s));
}

fraclap::PointFunction explicit_ball_solution(int n, double s, double r) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    const double kappa = ball_coefficient(n, s);
    fraclap::PointFunction u;
    u.a = -r;
    u.b = r;
    u.boundary_exponent = s;
    u.evaluator = [=](double x) { return kappa * std::pow((r - x) * (r + x), s); };
    u.derivative = [=](double x) { return -2.0 * s * kappa * x * std::pow((r - x) * (r + x), s - 1.0); };
    return u;
}

// ---------------------------------------------------------------- linear solves

Solution solve_linear(const Eigen::VectorXd& rhs, std::shared_ptr<const fraclap::FracLapMatrix> matrix,
                      const fraclap::GridFunction1D& grid_template) {
    const auto& K = matrix->stiffness;
    if (rhs.size() != K.rows()) throw DomainError("rhs size does not match the interior node count");
    if (!rhs.allFinite()) throw DomainError("rhs must be finite");
    Solution sol;
    sol.grid = grid_template;
    sol.s = matrix->order;
    sol.matrix = matrix;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(rhs.size());
    if (sup_norm(rhs) > 0.0) {
        const Eigen::VectorXd b = matrix->lumped_mass.cwiseProduct(rhs);
        Eigen::LLT<Eigen::MatrixXd> llt(K);
        if (llt.info() != Eigen::Success) throw LinearAlgebraError("stiffness matrix is not positive definite");
        u = llt.solve(b);
        u += llt.solve(b - K * u);  // one refinement step
        if (!u.allFinite()) throw LinearAlgebraError("linear solve produced non-finite values");
    }
    sol.grid.set_interior(u);
    sol.final_residual = sup_norm(matrix->apply(u) - rhs);
    attach_traces(sol);
    return sol;
}

Solution solve_linear(const Eigen::VectorXd& rhs, const fraclap::GridFunction1D& grid_template, double s) {
    auto m = std::make_shared<const fraclap::FracLapMatrix>(fraclap::assemble_matrix(grid_template, s));
    return solve_linear(rhs, m, grid_template);
}

Solution solve_linear(const std::function<double(double)>& rhs, const fraclap::GridFunction1D& grid_template,
                      double s) {
    const Eigen::VectorXd x = interior_nodes(grid_template);
    Eigen::VectorXd r(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) r[i] = rhs(x[i]);
    return solve_linear(r, grid_template, s);
}

// ---------------------------------------------------------------- Newton

Solution solve_semilinear(const SemilinearProblem& problem, const SolveConfig& config,
                          std::shared_ptr<const fraclap::FracLapMatrix> matrix) {
    problem.validate();
    if (problem.n != 1) throw DomainError("discrete solves are one-dimensional (n = 1)");
    if (!(config.damping > 0.0 && config.damping <= 1.0)) throw DomainError("damping must lie in (0, 1]");
    if (!(config.newton_tol > 0.0)) throw DomainError("newton_tol must be positive");
    const auto& K = matrix->stiffness;
    const auto& m = matrix->lumped_mass;
    fraclap::GridFunction1D grid;
    grid.a = matrix->a;
    grid.b = matrix->b;
    grid.nodes = matrix->nodes;
    grid.values.assign(grid.nodes.size(), 0.0);
    grid.grading_exponent = config.grading;
    const Eigen::VectorXd x = interior_nodes(grid);
    const Eigen::Index n = x.size();

    Eigen::VectorXd u(n);
    if (config.init == InitKind::given) {
        if (config.initial.size() != n) throw DomainError("initial iterate has the wrong size");
        u = config.initial;
    } else {
        Eigen::LLT<Eigen::MatrixXd> llt(K);
        if (llt.info() != Eigen::Success) throw LinearAlgebraError("stiffness matrix is not positive definite");
        u = config.init_scale * llt.solve(m);
    }

    auto residual = [&](const Eigen::VectorXd& v) {
        Eigen::VectorXd g = (K * v).cwiseQuotient(m);
        for (Eigen::Index i = 0; i < n; ++i) g[i] -= problem.f(x[i], v[i]);
        return g;
    };
    auto as_vector = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };

    Eigen::VectorXd g = residual(u);
    double gn = sup_norm(g);
    std::size_t it = 0;
    while (!(gn <= config.newton_tol)) {
        if (!std::isfinite(gn)) throw NonconvergenceError("Newton iterate became non-finite", as_vector(u), gn);
        if (it >= config.max_iter)
            throw NonconvergenceError("Newton did not converge within max_iter", as_vector(u), gn);
        Eigen::MatrixXd J = K;
        for (Eigen::Index i = 0; i < n; ++i) J(i, i) -= m[i] * problem.f_u_at(x[i], u[i]);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
        if (!(lu.rcond() > 1e-15)) throw LinearAlgebraError("Newton Jacobian is singular");
        const Eigen::VectorXd step = lu.solve(-(m.cwiseProduct(g)));
        if (!step.allFinite()) throw LinearAlgebraError("Newton step is not finite");
        double t = config.damping;
        Eigen::VectorXd trial = u + t * step;
        Eigen::VectorXd gt = residual(trial);
        double gtn = sup_norm(gt);
        while (!(gtn < gn) && t > 1.0 / 1024.0) {
            t *= 0.5;
            trial = u + t * step;
            gt = residual(trial);
            gtn = sup_norm(gt);
        }
        u = std::move(trial);
        g = std::move(gt);
        gn = gtn;
        ++it;
    }

    Solution sol;
    sol.grid = std::move(grid);
    sol.grid.set_interior(u);
    sol.s = problem.s;
    sol.newton_iterations = it;
    sol.final_residual = gn;
    sol.matrix = matrix;
    attach_traces(sol);
    return sol;
}

Solution solve_semilinear(const SemilinearProblem& problem, const SolveConfig& config) {
    const auto grid = fraclap::make_graded_grid(problem.a, problem.b, config.N, config.grading);
    auto m = std::make_shared<const fraclap::FracLapMatrix>(fraclap::assemble_matrix(grid, problem.s));
    return solve_semilinear(problem, config, m);
}

void write_solution_csv(const Solution& sol, std::ostream& out) {
    out << "x,u\n";
    char buf[64];
    for (std::size_t j = 0; j < sol.grid.size(); ++j) {
        auto r = std::to_chars(buf, buf + sizeof buf, sol.grid.nodes[j]);
        out.write(buf, r.ptr - buf);
        out << ',';
        r = std::to_chars(buf, buf + sizeof buf, sol.grid.values[j]);
        out.write(buf, r.ptr - buf);
        out << '\n';
    }
}

}  // namespace fracpoh::solver
