#include "fracpoh/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "fracpoh/errors.hpp"
#include "fracpoh/quad.hpp"

namespace fracpoh::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Lanczos g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// sin(pi x) with the argument reduced first so large |x| keeps its accuracy.
double sin_pi(double x) {
    double r = std::fmod(x, 2.0);
    if (r > 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    if (r > 0.5) r = 1.0 - r;
    if (r < -0.5) r = -1.0 - r;
    return std::sin(kPi * r);
}

double lanczos_sum(double xm1) {
    double acc = kLanczos[0];
    for (std::size_t i = 1; i < kLanczos.size(); ++i) acc += kLanczos[i] / (xm1 + static_cast<double>(i));
    return acc;
}

// psi on the whole real line minus the poles.
double digamma_any(double x) {
    if (x > 0.0) return digamma(x);
    if (is_nonpositive_integer(x)) throw DomainError("digamma pole");
    return digamma(1.0 - x) - kPi * std::cos(kPi * x) / sin_pi(x);
}

double series_2f1(double a, double b, double c, double z, std::size_t max_terms) {
    double term = 1.0, sum = 1.0;
    int small = 0;
    for (std::size_t n = 0; n < max_terms; ++n) {
        const double dn = static_cast<double>(n);
        term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
        sum += term;
        if (term == 0.0) return sum;
        if (std::abs(term) <= kEps * std::abs(sum)) {
            if (++small >= 3) return sum;
        } else {
            small = 0;
        }
    }
    throw DivergenceError("hypergeometric series did not converge within the term budget");
}

// 2F1(a, b; a + b; z) for z in (0, 1), logarithmic connection formula in 1 - z.
double hyp2f1_log_case(double a, double b, double z) {
    const double w = 1.0 - z;
    const double lw = std::log(w);
    double psi1 = -kEulerGamma;  // psi(n+1)
    double psia = digamma_any(a);
    double psib = digamma_any(b);
    double coef = 1.0;
    double sum = 0.0;
    int small = 0;
    for (int n = 0; n < 100000; ++n) {
        const double dn = n;
        const double term = coef * (2.0 * psi1 - psia - psib - lw);
        sum += term;
        if (std::abs(term) <= kEps * std::abs(sum)) {
            if (++small >= 3) break;
        } else {
            small = 0;
        }
        coef *= (a + dn) * (b + dn) / ((dn + 1.0) * (dn + 1.0)) * w;
        psi1 += 1.0 / (dn + 1.0);
        psia += 1.0 / (a + dn);
        psib += 1.0 / (b + dn);
        if (coef == 0.0) break;
    }
    return gamma(a + b) * rgamma(a) * rgamma(b) * sum;
}

double hyp2f1_unit_interval(double a, double b, double c, double z) {
    if (z <= 0.5) return series_2f1(a, b, c, z, 10000);
    const double m = c - a - b;
    const double mr = std::round(m);
    if (std::abs(m) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) {
        return hyp2f1_log_case(a, b, z);
    }
    if (std::abs(m - mr) < 1e-6) {
        // Near-degenerate connection coefficients; sum the series directly.
        if (z > 0.9999) throw DomainError("hyp2f1: c - a - b too close to an integer for z this close to 1");
        return series_2f1(a, b, c, z, 20'000'000);
    }
    const double w = 1.0 - z;
    const double t1 = gamma(c) * gamma(m) * rgamma(c - a) * rgamma(c - b);
    const double t2 = gamma(c) * gamma(-m) * rgamma(a) * rgamma(b);
    double out = 0.0;
    if (t1 != 0.0) out += t1 * series_2f1(a, b, 1.0 - m, w, 10000);
    if (t2 != 0.0) out += t2 * std::pow(w, m) * series_2f1(c - a, c - b, 1.0 + m, w, 10000);
    return out;
}

}  // namespace

double gamma(double x) {
    if (!std::isfinite(x)) throw DomainError("gamma: non-finite argument");
    if (is_nonpositive_integer(x)) throw DomainError("gamma: pole at a nonpositive integer");
    if (x < 0.5) return kPi / (sin_pi(x) * gamma(1.0 - x));
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    return std::sqrt(2.0 * kPi) * std::pow(t, xm1 + 0.5) * std::exp(-t) * lanczos_sum(xm1);
}

double log_gamma(double x) {
    if (!std::isfinite(x)) throw DomainError("log_gamma: non-finite argument");
    if (is_nonpositive_integer(x)) throw DomainError("log_gamma: pole at a nonpositive integer");
    if (x < 0.5) return std::log(kPi / std::abs(sin_pi(x))) - log_gamma(1.0 - x);
    const double xm1 = x - 1.0;
    const double t = xm1 + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (xm1 + 0.5) * std::log(t) - t + std::log(lanczos_sum(xm1));
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    return 1.0 / gamma(x);
}

double digamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("digamma requires a finite x > 0");
    double acc = 0.0;
    while (x < 10.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double r = 1.0 / (x * x);
    // Asymptotic Bernoulli series.
    const double tail =
        r * (1.0 / 12 - r * (1.0 / 120 - r * (1.0 / 252 - r * (1.0 / 240 - r * (1.0 / 132 - r * (691.0 / 32760 - r / 12))))));
    return acc + std::log(x) - 0.5 / x - tail;
}

double dilog(double t) {
    if (!std::isfinite(t)) throw DomainError("dilog: non-finite argument");
    if (t > 1.0) throw DomainError("dilog: argument above 1 (use psi_primitive for the continuation)");
    constexpr double z2 = kPi * kPi / 6.0;
    if (t == 1.0) return z2;
    if (t < -1.0) {
        const double l = std::log(-t);
        return -z2 - 0.5 * l * l - dilog(1.0 / t);
    }
    if (t < -0.5) {
        const double l = std::log1p(-t);
        return -dilog(t / (t - 1.0)) - 0.5 * l * l;
    }
    if (t > 0.5) {
        return z2 - std::log(t) * std::log1p(-t) - dilog(1.0 - t);
    }
    double power = t, sum = 0.0;
    for (int k = 1; k < 200; ++k) {
        const double term = power / (static_cast<double>(k) * k);
        sum += term;
        if (std::abs(term) <= 0.25 * kEps * std::abs(sum)) break;
        power *= t;
    }
    return sum;
}

double psi_primitive(double t) {
    if (!std::isfinite(t)) throw DomainError("psi_primitive: non-finite argument");
    if (t <= 1.0) return -dilog(t);
    const quad::SingularitySpec sing[] = {quad::SingularitySpec::log_at(0.0)};
    const auto r = quad::integrate_adaptive([](double u) { return std::log(u) / (1.0 + u); }, 0.0, t - 1.0, sing,
                                            quad::Options{1e-15, 1e-15});
    return -kPi * kPi / 6.0 + r.value;
}

double hyp2f1(double a, double b, double c, double z) {
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z)) {
        throw DomainError("hyp2f1: non-finite argument");
    }
    if (is_nonpositive_integer(c)) throw DomainError("hyp2f1: c is a nonpositive integer");
    if (z > 1.0) throw DomainError("hyp2f1: z > 1 is outside the real domain");
    if (z == 0.0) return 1.0;
    if (z == 1.0) {
        const double m = c - a - b;
        if (!(m > 0.0)) throw DivergenceError("hyp2f1 diverges at z = 1 when c - a - b <= 0");
        return gamma(c) * gamma(m) * rgamma(c - a) * rgamma(c - b);
    }
    if (is_nonpositive_integer(a) || is_nonpositive_integer(b)) {
        // Terminating polynomial.
        return series_2f1(a, b, c, z, 1'000'000);
    }
    if (z < 0.0) {
        const double w = z / (z - 1.0);
        return std::pow(1.0 - z, -a) * hyp2f1_unit_interval(a, c - b, c, w);
    }
    return hyp2f1_unit_interval(a, b, c, z);
}

double frac_lap_normalization(int n, double s) {
    if (n < 1) throw DomainError("dimension must be at least 1");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("fractional order must lie in (0,1)");
    const double half_n = 0.5 * n;
    return s * std::pow(4.0, s) * gamma(half_n + s) / (std::pow(kPi, half_n) * gamma(1.0 - s));
}

FracConstants frac_constants(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("frac_constants requires s in (0,1)");
    const double g = gamma(1.0 + s);
    FracConstants k{};
    k.s = s;
    k.c1 = g * std::sin(0.5 * kPi * s) / kPi;
    k.c2 = kPi / std::tan(0.5 * kPi * s);
    k.c3 = g * g;
    k.c_ns_1d_s = frac_lap_normalization(1, s);
    k.c_ns_1d_half_s = frac_lap_normalization(1, 0.5 * s);
    return k;
}

double c2_integrand(double s, double x) {
    if (x > 2.0) {
        // x^-1 [(1+u^s)/(1+u)^{1+s} - (1-u^s)/(1-u)^{1+s}], u = 1/x, with the
        // O(1) parts cancelled analytically.
        const double u = 1.0 / x;
        const double p = 1.0 + s;
        const double em_minus = std::expm1(p * std::log1p(-u));
        const double em_plus = std::expm1(p * std::log1p(u));
        const double num = (em_minus - em_plus) + std::pow(u, s) * (2.0 + em_minus + em_plus);
        return num / (x * std::pow((1.0 - u) * (1.0 + u), p));
    }
    const double xs = std::pow(x, s);
    const double one_minus_xs = x > 0.0 ? -std::expm1(s * std::log(x)) : 1.0;
    return one_minus_xs / std::pow(std::abs(1.0 - x), 1.0 + s) + (1.0 + xs) / std::pow(1.0 + x, 1.0 + s);
}

namespace {

// c2 integrand at x = 1 + sign * r, with |1 - x| = r passed exactly.
double c2_integrand_near_one(double s, double sign, double r) {
    const double lx = std::log1p(sign * r);
    const double one_minus_xs = -std::expm1(s * lx);
    const double xs = std::exp(s * lx);
    return one_minus_xs / std::pow(r, 1.0 + s) + (1.0 + xs) / std::pow(2.0 + sign * r, 1.0 + s);
}

}  // namespace

double c2_by_quadrature(double s, double tol) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("c2_by_quadrature requires s in (0,1)");
    const quad::Options opts{tol, tol};
    // (0, 2) folded about the singular point x = 1; the odd parts of the
    // |1-x|^{-s} singularity cancel between the two branches.
    auto folded = [s](double r) {
        return c2_integrand_near_one(s, 1.0, r) + c2_integrand_near_one(s, -1.0, r);
    };
    const quad::SingularitySpec ends[] = {quad::SingularitySpec::algebraic_at(0.0, 1.0 - s),
                                          quad::SingularitySpec::algebraic_at(1.0, s)};
    const double head = quad::integrate_adaptive(folded, 0.0, 1.0, ends, opts).value;
    auto f = [s](double x) { return c2_integrand(s, x); };
    const double tail = quad::integrate_halfline(f, 2.0, 1.0 + s, {}, opts).value;
    return head + tail;
}

double hyp2f1_unit_by_quadrature(double a, double b, double c, double tol) {
    if (!(c > b && b > 0.0 && c - a - b > 0.0))
        throw DomainError("Euler integral at z = 1 needs c > b > 0 and c - a - b > 0");
    // Split at 1/2 and substitute t = w^(1/b), 1 - t = w^(1/e) so both
    // halves have bounded integrands.
    const double e = c - a - b;
    auto half = [tol](double p1, double q, double lo_w, double hi_w) {
        auto f = [p1, q](double w) {
            const double t = std::pow(w, 1.0 / p1);
            return std::pow(1.0 - t, q) / p1;
        };
        const quad::SingularitySpec ends[] = {
            quad::SingularitySpec::algebraic_at(lo_w, std::min(1.0 / p1 - 1.0, 0.99))};
        return quad::integrate_adaptive(f, lo_w, hi_w, ends, quad::Options{tol, tol}).value;
    };
    const double integral = half(b, e - 1.0, 0.0, std::pow(0.5, b)) + half(e, b - 1.0, 0.0, std::pow(0.5, e));
    return std::exp(log_gamma(c) - log_gamma(b) - log_gamma(c - b)) * integral;
}

Extrapolation richardson(std::span<const double> values, double ratio, std::span<const double> exponents) {
    if (values.empty()) throw DomainError("richardson: no samples");
    if (!(ratio > 1.0)) throw DomainError("richardson: ratio must exceed 1");
    const std::size_t n = values.size();
    const std::size_t cols = std::min(exponents.size() + 1, n);
    std::vector<std::vector<double>> table(n, std::vector<double>(cols, 0.0));
    for (std::size_t k = 0; k < n; ++k) table[k][0] = values[k];
    for (std::size_t j = 1; j < cols; ++j) {
        const double f = std::pow(ratio, exponents[j - 1]) - 1.0;
        for (std::size_t k = j; k < n; ++k) {
            table[k][j] = table[k][j - 1] + (table[k][j - 1] - table[k - 1][j - 1]) / f;
        }
    }
    const std::size_t last = n - 1;
    const std::size_t jmax = cols - 1;
    double err = 0.0;
    if (jmax >= 1) err = std::abs(table[last][jmax] - table[last][jmax - 1]);
    if (last >= jmax + 1) err = std::max(err, std::abs(table[last][jmax] - table[last - 1][jmax]));
    if (n == 1) err = std::numeric_limits<double>::infinity();
    return {table[last][jmax], err};
}

double hyp2f1_endpoint_combination(double s, double x) {
    return hyp2f1(1.0 + s, 1.0 + s, 2.0 + s, x) / (s + 1.0) - 1.0 / (s * std::pow(1.0 - x, s));
}

Extrapolation hyp2f1_endpoint_limit(double s) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("hyp2f1_endpoint_limit requires s in (0,1)");
    std::vector<double> vals;
    for (int k = 4; k <= 14; ++k) vals.push_back(hyp2f1_endpoint_combination(s, 1.0 - std::ldexp(1.0, -k)));
    std::vector<double> exps;
    for (int j = 0; j < 4; ++j) {
        exps.push_back(j + 1.0 - s);
        exps.push_back(j + 1.0);
    }
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end(), [](double x, double y) { return std::abs(x - y) < 1e-9; }),
               exps.end());
    return richardson(vals, 2.0, exps);
}

}  // namespace fracpoh::specfun
