#pragma once

// Dirichlet problems (-Delta)^s u = f(x, u) on an interval with u = 0 outside,
// and the explicit solution on the ball as an oracle.

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fracpoh/fraclap.hpp"
#include "fracpoh/trace.hpp"

namespace fracpoh::solver {

using Nonlinearity = std::function<double(double x, double u)>;

struct SemilinearProblem {
    double s = 0.5;
    int n = 1;
    Nonlinearity f;
    Nonlinearity F;      // primitive in u with F(x, 0) = 0
    Nonlinearity F_x;    // optional partial derivative in x
    Nonlinearity f_u;    // optional; central differences otherwise
    double a = -1.0;
    double b = 1.0;
    std::string label;
    /// f(x, -u) = -f(x, u): the classifier then samples both signs.
    bool odd_in_u = false;

    /// Checks F(x,0) = 0, dF/du = f and, when present, F_x against
    /// central differences at pseudo-random points. Throws ValidationError.
    void validate() const;
    double f_u_at(double x, double u) const;
};

/// Builds a problem from a spec string:
///   const[:c=1]            f = c
///   power:p=2[,c=1]        f = c u^p
///   affine:eps=0.1         f = 1 + eps x
///   xpower:p=2,eps=0.1     f = (1 + eps x) u^p
/// Throws ConfigError on unknown names or parameters.
SemilinearProblem make_problem(const std::string& spec, double s, double a = -1.0, double b = 1.0);

struct Solution {
    fraclap::GridFunction1D grid;
    double s = 0.5;
    std::size_t newton_iterations = 0;
    double final_residual = 0.0;
    trace::TraceFit trace_a;
    trace::TraceFit trace_b;
    bool has_traces = false;
    std::shared_ptr<const fraclap::FracLapMatrix> matrix;
};

/// kappa(n, s) = 2^{-2s} Gamma(n/2) / (Gamma((n+2s)/2) Gamma(1+s)).
double ball_coefficient(int n, double s);

/// kappa (r^2 - rho^2)^s_+ as a function of the radial variable rho on (-r, r).
fraclap::PointFunction explicit_ball_solution(int n, double s, double r = 1.0);

/// Solves K u = m .* rhs for the interior nodes of the grid (rhs given at them).
Solution solve_linear(const Eigen::VectorXd& rhs, const fraclap::GridFunction1D& grid_template, double s);
Solution solve_linear(const Eigen::VectorXd& rhs, std::shared_ptr<const fraclap::FracLapMatrix> matrix,
                      const fraclap::GridFunction1D& grid_template);
Solution solve_linear(const std::function<double(double)>& rhs, const fraclap::GridFunction1D& grid_template,
                      double s);

enum class InitKind { linear, given };

struct SolveConfig {
    std::size_t N = 1024;  // cells
    double grading = 2.0;
    double newton_tol = 1e-8;
    std::size_t max_iter = 50;
    double damping = 1.0;
    InitKind init = InitKind::linear;
    double init_scale = 1.0;      // multiplies the solution of rhs = 1
    Eigen::VectorXd initial;      // interior values when init == given
};

/// Damped Newton on G(u) = m^-1 K u - f(x, u). Throws NonconvergenceError
/// (with the last iterate) after max_iter steps or on non-finite iterates,
/// LinearAlgebraError on a singular Jacobian.
Solution solve_semilinear(const SemilinearProblem& problem, const SolveConfig& config);
Solution solve_semilinear(const SemilinearProblem& problem, const SolveConfig& config,
                          std::shared_ptr<const fraclap::FracLapMatrix> matrix);

/// Node table "x,u" with a header row.
void write_solution_csv(const Solution& sol, std::ostream& out);

}  // namespace fracpoh::solver
