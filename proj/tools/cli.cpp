#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "fracpoh/errors.hpp"
#include "fracpoh/fraclap.hpp"
#include "fracpoh/pohozaev.hpp"
#include "fracpoh/scalingop.hpp"
#include "fracpoh/solver.hpp"
#include "fracpoh/specfun.hpp"
#include "fracpoh/trace.hpp"

namespace fracpoh::cli {

namespace {

using report::fmt;
using report::Json;

struct TaskOut {
    Json entry;
    bool passed = true;
    std::vector<std::vector<std::string>> rows;
};

using Task = std::function<TaskOut()>;

// Runs tasks on a small pool; results land at their task index.
std::vector<TaskOut> run_pool(const std::vector<Task>& tasks, std::size_t jobs) {
    std::vector<TaskOut> out(tasks.size());
    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < tasks.size();) {
            try {
                out[k] = tasks[k]();
            } catch (const Error& e) {
                out[k].entry = Json{{"error", e.what()}};
                out[k].passed = false;
            }
        }
    };
    if (jobs <= 1) {
        worker();
        return out;
    }
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    return out;
}

bool within(double err, double tol) { return std::isfinite(err) && err <= tol; }

bool is_const_spec(const std::string& spec) { return spec.rfind("const", 0) == 0; }

solver::SolveConfig solve_config(const RunConfig& c, std::size_t N, double newton_tol) {
    solver::SolveConfig sc;
    sc.N = N;
    sc.newton_tol = newton_tol;
    sc.max_iter = c.max_iter;
    sc.damping = c.damping;
    sc.init_scale = c.init_scale;
    return sc;
}

// ---------------------------------------------------------------- subcommands

TaskOut task_constants(double s, const std::map<std::string, double>& tol) {
    TaskOut t;
    const auto fc = specfun::frac_constants(s);
    const double c2q = specfun::c2_by_quadrature(s);
    const double err = std::abs(c2q - fc.c2);
    t.entry = report::to_json(fc);
    t.entry["c2_quad"] = c2q;
    t.entry["c2_error"] = err;
    t.passed = within(err, tol.at("c2"));
    t.entry["passed"] = t.passed;
    t.rows.push_back({fmt(s), fmt(fc.c1), fmt(fc.c2), fmt(fc.c3), fmt(fc.c_ns_1d_s), fmt(fc.c_ns_1d_half_s),
                      fmt(c2q), fmt(err)});
    return t;
}

TaskOut task_hyp2f1(double s, const std::map<std::string, double>& tol) {
    TaskOut t;
    const auto lim = specfun::hyp2f1_endpoint_limit(s);
    const double expected = -specfun::kPi / std::sin(specfun::kPi * s);
    const double err = std::abs(lim.value - expected);
    t.passed = within(err, tol.at("limit"));
    t.entry = Json{{"s", s},
                   {"limit", lim.value},
                   {"expected", expected},
                   {"error", err},
                   {"extrapolation_error", lim.error},
                   {"passed", t.passed}};
    t.rows.push_back({fmt(s), fmt(lim.value), fmt(expected), fmt(err), fmt(lim.error)});
    return t;
}

TaskOut task_verify_ball(double s, std::size_t N, const std::map<std::string, double>& tol) {
    TaskOut t;
    const auto u = solver::explicit_ball_solution(1, s);
    double pt = 0.0;
    for (int k = -18; k <= 18; ++k) pt = std::max(pt, std::abs(fraclap::frac_lap_point(u, s, 0.05 * k) - 1.0));
    const auto grid = fraclap::make_graded_grid(-1.0, 1.0, N);
    const auto M = fraclap::assemble_matrix(grid, s);
    const Eigen::VectorXd r = M.apply(fraclap::sample(u, grid).interior());
    double mat = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i)
        if (std::abs(grid.nodes[static_cast<std::size_t>(i) + 1]) <= 0.9) mat = std::max(mat, std::abs(r[i] - 1.0));
    const bool ok_pt = within(pt, tol.at("pointwise")), ok_mat = within(mat, tol.at("matrix"));
    t.passed = ok_pt && ok_mat;
    t.entry = Json{{"s", s},
                   {"N", N},
                   {"pointwise_max_error", pt},
                   {"matrix_max_error", mat},
                   {"passed", t.passed}};
    t.rows.push_back({fmt(s), std::to_string(N), fmt(pt), fmt(mat)});
    return t;
}

TaskOut task_solve(const RunConfig& c, double s, std::size_t N, const std::map<std::string, double>& tol) {
    TaskOut t;
    const auto problem = solver::make_problem(c.nonlinearity, s);
    try {
        const auto sol = solver::solve_semilinear(problem, solve_config(c, N, tol.at("newton")));
        t.entry = report::solution_sidecar(sol);
        t.passed = within(sol.final_residual, tol.at("newton"));
        for (std::size_t j = 0; j < sol.grid.size(); ++j)
            t.rows.push_back({fmt(s), std::to_string(N), fmt(sol.grid.nodes[j]), fmt(sol.grid.values[j])});
    } catch (const NonconvergenceError& e) {
        t.entry = Json{{"s", s}, {"N", N}, {"error", e.what()}, {"last_residual", e.last_residual()}};
        t.passed = false;
    }
    t.entry["passed"] = t.passed;
    return t;
}

TaskOut task_pohozaev(const RunConfig& c, double s, std::size_t N, bool with_bilinear,
                      const std::map<std::string, double>& tol) {
    TaskOut t;
    const auto problem = solver::make_problem(c.nonlinearity, s);
    const double rel_tol = tol.at("rel_residual");
    const auto sol = solver::solve_semilinear(problem, solve_config(c, N, 1e-8));
    t.entry = Json{{"s", s}, {"N", N}};
    t.entry["solution"] = report::solution_sidecar(sol);

    const auto id = pohozaev::check_identity(sol, problem);
    t.entry["identity"] = report::to_json(id);
    t.passed = within(id.rel_residual, rel_tol);
    pohozaev::PohozaevReport batch = id;
    if (problem.F_x) {
        const auto idx = pohozaev::check_identity_x(sol, problem);
        t.entry["identity_x"] = report::to_json(idx);
        t.passed = t.passed && within(idx.rel_residual, rel_tol);
        batch = idx;
    }
    if (is_const_spec(c.nonlinearity) && problem.a == -1.0 && problem.b == 1.0) {
        const double amp = problem.f(0.0, 0.0);
        const double kappa = solver::ball_coefficient(1, s);
        fraclap::PointFunction u = solver::explicit_ball_solution(1, s);
        auto base = u.evaluator;
        auto dbase = u.derivative;
        u.evaluator = [base, amp](double x) { return amp * base(x); };
        if (dbase) u.derivative = [dbase, amp](double x) { return amp * dbase(x); };
        const double q = amp * kappa * std::pow(2.0, s);
        const auto an = pohozaev::check_identity(u, q, q, problem);
        t.entry["identity_analytic"] = report::to_json(an);
        t.passed = t.passed && within(an.rel_residual, rel_tol);
    }
    if (with_bilinear) {
        const auto u = solver::explicit_ball_solution(1, s);
        fraclap::PointFunction v;
        v.a = -1.0;
        v.b = 1.0;
        v.boundary_exponent = s;
        v.evaluator = [s](double x) { return x * std::pow((1.0 - x) * (1.0 + x), s); };
        v.derivative = [s](double x) {
            const double q = (1.0 - x) * (1.0 + x);
            return std::pow(q, s) - 2.0 * s * x * x * std::pow(q, s - 1.0);
        };
        const auto bl = pohozaev::check_bilinear(u, v, s, -1.0, 1.0);
        t.entry["bilinear"] = report::to_json(bl);
        t.passed = t.passed && within(bl.residual, tol.at("bilinear"));
    }
    t.entry["energy"] = report::to_json(pohozaev::energy(sol, problem));
    t.entry["criticality"] = report::to_json(pohozaev::classify_nonlinearity(problem, 0.0, 2.0));
    t.entry["passed"] = t.passed;
    t.rows.push_back({fmt(s), std::to_string(N), fmt(batch.lhs), fmt(batch.rhs), fmt(batch.rel_residual)});
    return t;
}

TaskOut task_trace_fit(double s, const std::string& probe, const std::map<std::string, double>& tol) {
    TaskOut t;
    const auto fc = specfun::frac_constants(s);
    trace::LogJumpFit fit;
    if (probe == "distance") {
        const auto d0 = fraclap::distance_power(-1.0, 1.0, s);
        fit = trace::fit_log_jump([&](double x) { return fraclap::frac_lap_point(d0, s / 2.0, x); }, s, 1.0, -1.0,
                                  1.0);
    } else {
        fit = trace::fit_log_jump([&](double x) { return fraclap::half_lap_trunc_phi(1.0, s, x); }, s, 0.0, 0.0,
                                  1.0);
    }
    const double e_log = std::abs(fit.c_log / fc.c1 - 1.0);
    const double e_jump = std::abs(fit.jump() / (fc.c1 * fc.c2) - 1.0);
    t.passed = within(e_log, tol.at("log_slope")) && within(e_jump, tol.at("jump"));
    t.entry = Json{{"s", s}, {"probe", probe}};
    t.entry["fit"] = report::to_json(fit);
    t.entry["jump"] = fit.jump();
    t.entry["c1"] = fc.c1;
    t.entry["c1c2"] = fc.c1 * fc.c2;
    t.entry["log_slope_rel_error"] = e_log;
    t.entry["jump_rel_error"] = e_jump;
    t.entry["passed"] = t.passed;
    t.rows.push_back({fmt(s), probe, fmt(fit.c_log), fmt(fit.jump()), fmt(e_log), fmt(e_jump)});
    return t;
}

TaskOut task_scaling(double A, double B, const std::map<std::string, double>& tol) {
    TaskOut t;
    scalingop::LogJumpProfile w;
    w.A = A;
    w.B = B;
    const auto est = scalingop::frak_i_estimate(w);
    const double expected = A * A * specfun::kPi * specfun::kPi + B * B;
    const double err = std::abs(est.value - expected) / std::max(std::abs(expected), 1e-300);
    t.passed = within(err, tol.at("rel"));
    t.entry = Json{{"A", A}, {"B", B}};
    t.entry["estimate"] = report::to_json(est);
    t.entry["expected"] = expected;
    t.entry["rel_error"] = err;
    t.entry["passed"] = t.passed;
    for (std::size_t k = 0; k < est.lambda_ladder.size(); ++k)
        t.rows.push_back({fmt(est.lambda_ladder[k]), fmt(est.raw_quotients[k])});
    t.rows.push_back({fmt(1.0), fmt(est.value)});
    return t;
}

}  // namespace

std::map<std::string, double> default_tolerances(const std::string& sub) {
    if (sub == "constants") return {{"c2", 1e-8}};
    if (sub == "hyp2f1") return {{"limit", 1e-3}, {"gauss", 1e-10}};
    if (sub == "verify-ball") return {{"pointwise", 1e-6}, {"matrix", 1e-2}};
    if (sub == "solve") return {{"newton", 1e-8}};
    if (sub == "pohozaev-check") return {{"rel_residual", 1e-3}, {"bilinear", 1e-3}};
    if (sub == "trace-fit") return {{"log_slope", 2e-2}, {"jump", 5e-2}};
    if (sub == "scaling") return {{"rel", 1e-2}};
    throw ConfigError("subcommand: unknown value '" + sub + "'");
}

std::vector<std::string> csv_columns(const std::string& sub) {
    if (sub == "constants") return {"s", "c1", "c2", "c3", "c_ns_1d_s", "c_ns_1d_half_s", "c2_quad", "c2_error"};
    if (sub == "hyp2f1") return {"s", "limit", "expected", "error", "extrapolation_error"};
    if (sub == "verify-ball") return {"s", "N", "pointwise_max_error", "matrix_max_error"};
    if (sub == "solve") return {"s", "N", "x", "u"};
    if (sub == "pohozaev-check") return {"s", "N", "lhs", "rhs", "rel_residual"};
    if (sub == "trace-fit") return {"s", "probe", "c_log", "jump", "log_slope_rel_error", "jump_rel_error"};
    if (sub == "scaling") return {"lambda", "quotient"};
    throw ConfigError("subcommand: unknown value '" + sub + "'");
}

void RunConfig::validate() const {
    if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) == kSubcommands.end())
        throw ConfigError("subcommand: unknown value '" + subcommand + "'");
    if (s.empty()) throw ConfigError("s: sweep list is empty");
    for (double v : s)
        if (!(v > 0.0 && v < 1.0)) throw ConfigError("s: value " + fmt(v) + " is outside (0, 1)");
    if (N.empty()) throw ConfigError("N: sweep list is empty");
    for (std::size_t v : N)
        if (v < 16 || v > 8192) throw ConfigError("N: value " + std::to_string(v) + " is outside [16, 8192]");
    if (format != "json" && format != "csv") throw ConfigError("format: expected json or csv, got '" + format + "'");
    const auto defaults = default_tolerances(subcommand);
    for (const auto& [name, v] : tolerances) {
        if (!defaults.count(name))
            throw ConfigError("tol: '" + name + "' is not a tolerance of " + subcommand);
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tol: '" + name + "' must be positive");
    }
    if (!(damping > 0.0 && damping <= 1.0)) throw ConfigError("damping: must lie in (0, 1]");
    if (!(init_scale > 0.0) || !std::isfinite(init_scale)) throw ConfigError("init-scale: must be positive");
    if (max_iter < 1) throw ConfigError("max-iter: must be at least 1");
    if (!std::isfinite(A) || !std::isfinite(B)) throw ConfigError("A/B: must be finite");
    const int given = ha.has_value() + hb.has_value() + hc.has_value() + hz.has_value();
    if (given != 0 && given != 4) throw ConfigError("hyp2f1: --a, --b, --c and --z go together");
    if (subcommand == "solve" || subcommand == "pohozaev-check") solver::make_problem(nonlinearity, s.front());
}

report::Json RunConfig::to_json() const {
    Json j;
    j["subcommand"] = subcommand;
    j["s"] = s;
    j["N"] = N;
    auto tol = default_tolerances(subcommand);
    for (const auto& [k, v] : tolerances) tol[k] = v;
    j["tolerances"] = Json::object();
    for (const auto& [k, v] : tol) j["tolerances"][k] = v;
    j["nonlinearity"] = nonlinearity;
    j["format"] = format;
    j["output"] = output;
    j["init_scale"] = init_scale;
    j["max_iter"] = max_iter;
    j["damping"] = damping;
    j["A"] = A;
    j["B"] = B;
    if (ha) j["hyp2f1_point"] = Json{{"a", *ha}, {"b", *hb}, {"c", *hc}, {"z", *hz}};
    return j;
}

RunResult execute(const RunConfig& c) {
    c.validate();
    auto tol = default_tolerances(c.subcommand);
    for (const auto& [k, v] : c.tolerances) tol[k] = v;

    std::vector<Task> tasks;
    const std::string& sub = c.subcommand;
    if (sub == "constants") {
        for (double s : c.s) tasks.push_back([s, &tol] { return task_constants(s, tol); });
    } else if (sub == "hyp2f1") {
        for (double s : c.s) tasks.push_back([s, &tol] { return task_hyp2f1(s, tol); });
    } else if (sub == "verify-ball") {
        for (double s : c.s)
            for (std::size_t N : c.N) tasks.push_back([s, N, &tol] { return task_verify_ball(s, N, tol); });
    } else if (sub == "solve") {
        for (double s : c.s)
            for (std::size_t N : c.N) tasks.push_back([&c, s, N, &tol] { return task_solve(c, s, N, tol); });
    } else if (sub == "pohozaev-check") {
        for (double s : c.s)
            for (std::size_t k = 0; k < c.N.size(); ++k) {
                const std::size_t N = c.N[k];
                tasks.push_back([&c, s, N, k, &tol] { return task_pohozaev(c, s, N, k == 0, tol); });
            }
    } else if (sub == "trace-fit") {
        for (double s : c.s)
            for (const char* probe : {"distance", "phi"})
                tasks.push_back([s, probe, &tol] { return task_trace_fit(s, probe, tol); });
    } else if (sub == "scaling") {
        tasks.push_back([&c, &tol] { return task_scaling(c.A, c.B, tol); });
    }

    const auto outs = run_pool(tasks, c.jobs);

    RunResult res;
    Json& rep = res.report;
    rep["schema_version"] = report::kSchemaVersion;
    rep["subcommand"] = sub;
    rep["config"] = c.to_json();
    bool passed = true;
    Json results = Json::array();
    std::vector<std::vector<std::string>> rows;
    for (const auto& o : outs) {
        passed = passed && o.passed;
        results.push_back(o.entry);
        rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    }
    if (sub == "hyp2f1" && c.ha) {
        Json point{{"a", *c.ha}, {"b", *c.hb}, {"c", *c.hc}, {"z", *c.hz}};
        try {
            point["value"] = specfun::hyp2f1(*c.ha, *c.hb, *c.hc, *c.hz);
            if (*c.hz == 1.0) {
                const double q = specfun::hyp2f1_unit_by_quadrature(*c.ha, *c.hb, *c.hc);
                const double err = std::abs(q - point["value"].get<double>()) / std::max(1.0, std::abs(q));
                point["euler_integral"] = q;
                point["rel_error"] = err;
                const bool ok = within(err, tol.at("gauss"));
                point["passed"] = ok;
                passed = passed && ok;
            }
        } catch (const Error& e) {
            point["error"] = e.what();
            passed = false;
        }
        rep["point"] = point;
    }
    rep["passed"] = passed;
    rep["results"] = std::move(results);

    std::ostringstream csv;
    const auto cols = csv_columns(sub);
    for (std::size_t k = 0; k < cols.size(); ++k) csv << (k ? "," : "") << cols[k];
    csv << '\n';
    for (const auto& r : rows) {
        for (std::size_t k = 0; k < r.size(); ++k) csv << (k ? "," : "") << r[k];
        csv << '\n';
    }
    res.csv = csv.str();
    res.exit_code = passed ? 0 : 1;
    return res;
}

int run(const RunConfig& config, std::ostream& fallback, std::ostream& diagnostics) {
    RunResult res;
    try {
        res = execute(config);
    } catch (const ConfigError& e) {
        diagnostics << "config error: " << e.what() << '\n';
        return 2;
    }
    const std::string payload = config.format == "csv" ? res.csv : res.report.dump(2) + "\n";
    if (config.output.empty()) {
        fallback << payload;
    } else {
        std::ofstream f(config.output, std::ios::binary);
        if (!f) {
            diagnostics << "config error: output: cannot open '" << config.output << "'\n";
            return 2;
        }
        f << payload;
    }
    if (res.exit_code != 0) diagnostics << "tolerance check failed; see report\n";
    return res.exit_code;
}

}  // namespace fracpoh::cli
