#pragma once

// Adaptive Gauss-Kronrod quadrature for integrands with endpoint and interior
// singularities: integrable log and algebraic singularities, principal-value
// poles, and algebraically decaying half-line tails.

#include <cstddef>
#include <functional>
#include <span>

namespace fracpoh::quad {

using Integrand = std::function<double(double)>;

enum class SingularityKind {
    log,        // |f(t)| ~ |log|t - location||
    algebraic,  // |f(t)| ~ |t - location|^exponent, exponent > -1; exponent 0 is a plain breakpoint
    pv_pole,    // f(t) ~ c / (t - location), integrated as a symmetric-excision limit
};

struct SingularitySpec {
    double location = 0.0;
    SingularityKind kind = SingularityKind::algebraic;
    double exponent = 0.0;  // only read for algebraic

    static SingularitySpec log_at(double x) { return {x, SingularityKind::log, 0.0}; }
    static SingularitySpec algebraic_at(double x, double beta) { return {x, SingularityKind::algebraic, beta}; }
    static SingularitySpec breakpoint_at(double x) { return {x, SingularityKind::algebraic, 0.0}; }
    static SingularitySpec pole_at(double x) { return {x, SingularityKind::pv_pole, 0.0}; }
};

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    std::size_t max_evaluations = 1'000'000;
};

/// Integrates f over [a, b]. Declared singularities split the range; each
/// singular end of a piece is removed by a power substitution
/// t = loc + h w^m with m = 2/(1+beta) for algebraic and m = 4 for log ends.
/// PV poles are integrated on a symmetric window as f(p+r) + f(p-r).
///
/// Converges when the summed error estimate is below max(abs_tol, rel_tol |I|).
/// When repeated bisections stop reducing the error (rounding noise in f),
/// an error estimate up to 16x the target is accepted; error_estimate
/// always reports the actual estimate.
/// Throws AccuracyError (with the best estimate) when the evaluation budget
/// is exhausted, EvaluationError when f returns a non-finite value.
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              std::span<const SingularitySpec> singularities, const Options& opts);

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              std::span<const SingularitySpec> singularities, double tol);

/// Principal value of f over [a, b] with a simple pole at `pole` in (a, b).
QuadResult integrate_pv(const Integrand& f, double pole, double a, double b, double tol);
QuadResult integrate_pv(const Integrand& f, double pole, double a, double b,
                        std::span<const SingularitySpec> other_singularities, const Options& opts);

/// Integral of f over [a, inf) for |f(t)| <= C t^-decay_exponent, decay_exponent > 1.
/// Uses t = a + (1-y)/y; the tail becomes an algebraic end at y = 0 with
/// exponent decay_exponent - 2. Finite singularities are mapped along.
QuadResult integrate_halfline(const Integrand& f, double a, double decay_exponent, double tol);
QuadResult integrate_halfline(const Integrand& f, double a, double decay_exponent,
                              std::span<const SingularitySpec> singularities, const Options& opts);

}  // namespace fracpoh::quad
