#pragma once

// Numerical checks of the fractional Pohozaev identity in one dimension:
//   (2s - n) int u f + 2n int F + 2 int x F_x = Gamma(1+s)^2 sum_{x in dOmega} q(x)^2 (x . nu)
// with q = u/delta^s at the endpoints, and of its bilinear and energy forms.

#include <optional>
#include <string>

#include "fracpoh/fraclap.hpp"
#include "fracpoh/solver.hpp"

namespace fracpoh::pohozaev {

struct PohozaevReport {
    double s = 0.0;
    int n = 1;
    double term_ufu = 0.0;
    double term_F = 0.0;
    double term_Fx = 0.0;
    double boundary_sum = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_residual = 0.0;
    double rel_residual = 0.0;
};

/// Fills lhs, rhs and residuals from the terms.
PohozaevReport finish_report(double s, int n, double term_ufu, double term_F, double term_Fx, double boundary_sum);

/// Discrete solution: graded-grid trapezoid rule, endpoint cells with the u ~ q delta^s model.
/// Ignores F_x. Throws PreconditionError when the solution has no traces.
PohozaevReport check_identity(const solver::Solution& sol, const solver::SemilinearProblem& problem);

/// As check_identity with the 2 int x F_x term. Throws ValidationError when F_x is
/// missing or disagrees with F.
PohozaevReport check_identity_x(const solver::Solution& sol, const solver::SemilinearProblem& problem);

/// Continuous u with given endpoint traces; integrals by adaptive quadrature.
PohozaevReport check_identity(const fraclap::PointFunction& u, double q_a, double q_b,
                              const solver::SemilinearProblem& problem, bool with_Fx = false);

struct BilinearReport {
    double lhs = 0.0;        // int L u v'
    double rhs = 0.0;        // -int u' L v + Gamma(1+s)^2 [q_u q_v nu]
    double residual = 0.0;
    double boundary = 0.0;   // Gamma(1+s)^2 (q_u(b) q_v(b) - q_u(a) q_v(a))
};

/// int_a^b (-Delta)^s u v' = -int_a^b u' (-Delta)^s v + Gamma(1+s)^2 [q_u q_v nu],
/// every term by quadrature, traces extracted from u and v.
BilinearReport check_bilinear(const fraclap::PointFunction& u, const fraclap::PointFunction& v, double s,
                              double a, double b);

struct EnergyReport {
    double seminorm_sq = 0.0;
    double energy = 0.0;
};

EnergyReport energy(const solver::Solution& sol, const solver::SemilinearProblem& problem);
EnergyReport energy(const fraclap::PointFunction& u, const solver::SemilinearProblem& problem);

enum class Criticality { subcritical, critical, supercritical_strict };
std::string to_string(Criticality c);

struct CriticalityVerdict {
    Criticality classification = Criticality::subcritical;
    std::optional<double> witness;        // u violating (subcritical) or attaining equality (critical)
    std::optional<double> witness_x;
};

/// Samples D(x, u) = (n-2s)/2 u f - n F - x F_x over u in [lo, hi] (and -u when f is odd),
/// x over the domain when f depends on x.
CriticalityVerdict classify_nonlinearity(const solver::SemilinearProblem& problem, double lo, double hi,
                                         std::size_t samples = 200);

}  // namespace fracpoh::pohozaev
