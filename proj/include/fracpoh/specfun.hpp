#pragma once

// Special functions and closed-form constants for the fractional Laplacian
// on the line: Gamma, digamma, dilogarithm, Gauss 2F1, normalization
// constants and the boundary-expansion constants c1, c2, c3.

#include <span>
#include <vector>

namespace fracpoh::specfun {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

/// Gamma function. Lanczos approximation, reflection for x < 1/2.
/// Throws DomainError at 0, -1, -2, ...
double gamma(double x);

/// log|Gamma(x)|, same domain as gamma().
double log_gamma(double x);

/// 1/Gamma(x); zero at the poles of Gamma.
double rgamma(double x);

/// Digamma psi(x) = Gamma'(x)/Gamma(x) for x > 0.
double digamma(double x);

/// Real dilogarithm Li2(t) = -int_0^t log(1-r)/r dr for t <= 1.
double dilog(double t);

/// Psi(t) = int_0^t log|r-1| / r dr. Equals -Li2(t) for t <= 1; for t > 1
/// the log singularity at r = 1 is integrated numerically and added to Psi(1).
double psi_primitive(double t);

/// Gauss hypergeometric function 2F1(a, b; c; z) for real z <= 1.
/// z in [0, 1/2]: direct series. z < 0: Pfaff transform into (0, 1).
/// z in (1/2, 1): connection formula in 1 - z (log form when c = a + b).
/// z = 1: Gauss value, requires c - a - b > 0 (else DivergenceError).
/// Throws DomainError for c in {0, -1, ...} or z > 1.
double hyp2f1(double a, double b, double c, double z);

/// Normalization c_{n,s} of (-Delta)^s in dimension n:
/// s 4^s Gamma((n+2s)/2) / (pi^{n/2} Gamma(1-s)).
double frac_lap_normalization(int n, double s);

struct FracConstants {
    double s;
    double c1;              // Gamma(1+s) sin(pi s/2) / pi, coefficient of log(delta)
    double c2;              // pi / tan(pi s/2), inside/outside jump over c1
    double c3;              // Gamma(1+s)^2, boundary constant of the Pohozaev identity
    double c_ns_1d_s;       // c_{1,s}
    double c_ns_1d_half_s;  // c_{1,s/2}
};

/// Closed-form constants for s in (0,1). Throws DomainError otherwise.
FracConstants frac_constants(double s);

/// The integrand whose integral over (0, inf) is c2:
/// (1 - x^s)/|1-x|^{1+s} + (1 + x^s)/(1+x)^{1+s}.
double c2_integrand(double s, double x);

/// c2 by quadrature over (0, inf), independent of the closed form.
double c2_by_quadrature(double s, double tol = 1e-12);

/// 2F1(a, b; c; 1) from the Euler integral by quadrature, for c > b > 0 and
/// c - a - b > 0. Independent of the Gamma-quotient branch of hyp2f1.
double hyp2f1_unit_by_quadrature(double a, double b, double c, double tol = 1e-13);

/// Generalized Richardson extrapolation. values[k] are samples at
/// h_k = h_0 * ratio^-k; the error is assumed to expand in h^p for the given
/// exponents (ascending). Returns the extrapolated limit and an error
/// estimate from the last two diagonal entries.
struct Extrapolation {
    double value;
    double error;
};
Extrapolation richardson(std::span<const double> values, double ratio, std::span<const double> exponents);

/// lim_{x->1} { 2F1(1+s,1+s;2+s;x)/(s+1) - 1/(s (1-x)^s) }, s in (0,1), by
/// Richardson extrapolation on x_k = 1 - 2^-k, k = 4..14.
/// The limit equals -pi/sin(pi s).
Extrapolation hyp2f1_endpoint_limit(double s);

/// The sampled function whose limit hyp2f1_endpoint_limit() extrapolates.
double hyp2f1_endpoint_combination(double s, double x);

}  // namespace fracpoh::specfun
