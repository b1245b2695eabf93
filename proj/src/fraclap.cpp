#include "fracpoh/fraclap.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include "fracpoh/errors.hpp"
#include "fracpoh/quad.hpp"
#include "fracpoh/specfun.hpp"

namespace fracpoh::fraclap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_order(double order) {
    if (!(order > 0.0 && order < 1.0)) throw DomainError("order must lie in (0, 1)");
}

// A point where the function is not smooth, with the local exponent of
// |u(y) - u(p)|: e for a support end, 1 for a kink.
struct Feature {
    double p;
    double gamma;
    bool support_end;
};

std::vector<Feature> features_of(const PointFunction& u) {
    std::vector<Feature> out;
    if (std::isfinite(u.a)) out.push_back({u.a, u.boundary_exponent, true});
    if (std::isfinite(u.b)) out.push_back({u.b, u.boundary_exponent, true});
    for (double p : u.breakpoints)
        if (p > u.a && p < u.b) out.push_back({p, 1.0, false});
    return out;
}

// Local exponent of u at x and the distance to the nearest other feature.
struct LocalShape {
    double gamma;      // 2 where smooth
    double scale;      // distance to the nearest other feature
    bool outside;      // x outside the closed support: integrand vanishes near r = 0
};

LocalShape local_shape(const std::vector<Feature>& feats, const PointFunction& u, double x) {
    LocalShape sh{2.0, kInf, !(x >= u.a && x <= u.b)};
    for (const auto& f : feats) {
        if (f.p == x) {
            sh.gamma = std::min(sh.gamma, f.gamma);
            continue;
        }
        sh.scale = std::min(sh.scale, std::abs(x - f.p));
    }
    if (!std::isfinite(sh.scale)) sh.scale = 1.0;
    return sh;
}

double kernel_pow(double r, double expo) { return std::exp(-expo * std::log(r)); }

// Singular points in r = |y - x| induced by the features of u.
void push_feature_points(const std::vector<Feature>& feats, double x, double lo,
                         std::vector<quad::SingularitySpec>& out) {
    for (const auto& f : feats) {
        const double r = std::abs(x - f.p);
        if (!(r > lo)) continue;
        const double beta = (f.support_end && f.gamma < 1.0) ? f.gamma : 0.0;
        out.push_back(quad::SingularitySpec::algebraic_at(r, beta));
    }
}

double feature_radius(const std::vector<Feature>& feats, double x) {
    double R = 0.0;
    for (const auto& f : feats) R = std::max(R, std::abs(x - f.p));
    return R;
}

quad::Options quad_options(const PointOptions& o, double scale) {
    quad::Options q;
    q.abs_tol = o.abs_tol / scale;
    q.rel_tol = o.rel_tol;
    q.max_evaluations = o.max_evaluations;
    return q;
}

// E(r) = (|r|^{1-2s} - 1)/(1-2s), log|r| at s = 1/2.
double e_kernel(double r, double s) {
    const double p = 1.0 - 2.0 * s;
    const double l = std::log(std::abs(r));
    if (p == 0.0) return l;
    return std::expm1(p * l) / p;
}

// Second primitive of |r|^{1-2s}/(1-2s) up to a quadratic.
double g2_kernel(double r, double s) {
    if (r == 0.0) return 0.0;
    return r * r * e_kernel(r, s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
}

constexpr std::array<double, 2> kGL2x = {-0.5773502691896257645, 0.5773502691896257645};
constexpr std::array<double, 2> kGL2w = {1.0, 1.0};
constexpr std::array<double, 4> kGL4x = {-0.8611363115940525752, -0.3399810435848562648,
                                         0.3399810435848562648, 0.8611363115940525752};
constexpr std::array<double, 4> kGL4w = {0.3478548451374538574, 0.6521451548625461426,
                                         0.6521451548625461426, 0.3478548451374538574};
constexpr std::array<double, 8> kGL8x = {-0.9602898564975362317, -0.7966664774136267396,
                                         -0.5255324099163289858, -0.1834346424956498049,
                                         0.1834346424956498049,  0.5255324099163289858,
                                         0.7966664774136267396,  0.9602898564975362317};
constexpr std::array<double, 8> kGL8w = {0.1012285362903762591, 0.2223810344533744706,
                                         0.3137066458778872873, 0.3626837833783619830,
                                         0.3626837833783619830, 0.3137066458778872873,
                                         0.2223810344533744706, 0.1012285362903762591};

// Gauss points of one hat function (both elements) weighted by the hat value.
struct HatRule {
    std::vector<double> x;
    std::vector<double> w;
};

template <std::size_t Q>
HatRule hat_rule(double xl, double xc, double xr, const std::array<double, Q>& gx,
                 const std::array<double, Q>& gw) {
    HatRule r;
    r.x.reserve(2 * Q);
    r.w.reserve(2 * Q);
    const double hl = xc - xl, hr = xr - xc;
    for (std::size_t k = 0; k < Q; ++k) {
        const double t = 0.5 * (gx[k] + 1.0);
        r.x.push_back(xl + hl * t);
        r.w.push_back(0.5 * hl * gw[k] * t);
    }
    for (std::size_t k = 0; k < Q; ++k) {
        const double t = 0.5 * (gx[k] + 1.0);
        r.x.push_back(xc + hr * t);
        r.w.push_back(0.5 * hr * gw[k] * (1.0 - t));
    }
    return r;
}

void put_double(std::ostream& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
}

}  // namespace

// ---------------------------------------------------------------- grids

double GridFunction1D::delta(std::size_t j) const { return std::min(nodes[j] - a, b - nodes[j]); }

double GridFunction1D::interpolate(double x) const {
    if (!(x > a && x < b)) return 0.0;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - nodes.begin());
    const double x0 = nodes[j - 1], x1 = nodes[j];
    const double t = (x - x0) / (x1 - x0);
    return values[j - 1] * (1.0 - t) + values[j] * t;
}

Eigen::VectorXd GridFunction1D::interior() const {
    Eigen::VectorXd v(static_cast<Eigen::Index>(nodes.size() - 2));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = values[static_cast<std::size_t>(i) + 1];
    return v;
}

void GridFunction1D::set_interior(const Eigen::VectorXd& v) {
    if (static_cast<std::size_t>(v.size()) + 2 != nodes.size()) throw DomainError("interior size mismatch");
    values.assign(nodes.size(), 0.0);
    for (Eigen::Index i = 0; i < v.size(); ++i) values[static_cast<std::size_t>(i) + 1] = v[i];
}

void GridFunction1D::validate() const {
    if (nodes.size() < 3) throw DomainError("grid needs at least 3 nodes");
    if (values.size() != nodes.size()) throw DomainError("values and nodes differ in length");
    if (!(a < b)) throw DomainError("grid interval must satisfy a < b");
    if (nodes.front() != a || nodes.back() != b) throw DomainError("grid must start at a and end at b");
    for (std::size_t j = 1; j < nodes.size(); ++j)
        if (!(nodes[j] > nodes[j - 1])) throw DomainError("grid nodes must be strictly increasing");
    if (values.front() != 0.0 || values.back() != 0.0) throw DomainError("endpoint values must be exactly 0");
    if (!(grading_exponent >= 1.0)) throw DomainError("grading exponent must be >= 1");
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError("non-finite grid value");
}

GridFunction1D make_graded_grid(double a, double b, std::size_t cells, double grading_exponent) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw DomainError("graded grid needs finite a < b");
    if (cells < 2) throw DomainError("graded grid needs at least 2 cells");
    if (!(grading_exponent >= 1.0)) throw DomainError("grading exponent must be >= 1");
    GridFunction1D g;
    g.a = a;
    g.b = b;
    g.grading_exponent = grading_exponent;
    g.nodes.resize(cells + 1);
    const double half = 0.5 * (b - a);
    const double n = static_cast<double>(cells);
    for (std::size_t j = 0; j <= cells; ++j) {
        if (2 * j <= cells)
            g.nodes[j] = a + half * std::pow(2.0 * static_cast<double>(j) / n, grading_exponent);
        else
            g.nodes[j] = b - half * std::pow(2.0 * static_cast<double>(cells - j) / n, grading_exponent);
    }
    g.nodes.front() = a;
    g.nodes.back() = b;
    g.values.assign(cells + 1, 0.0);
    return g;
}

GridFunction1D sample(const PointFunction& f, const GridFunction1D& grid_template) {
    GridFunction1D g = grid_template;
    g.values.assign(g.nodes.size(), 0.0);
    for (std::size_t j = 1; j + 1 < g.nodes.size(); ++j) g.values[j] = f(g.nodes[j]);
    return g;
}

// ---------------------------------------------------------------- point functions

double PointFunction::slope(double x) const {
    if (derivative) return derivative(x);
    double d = 1.0;
    if (std::isfinite(a)) d = std::min(d, x - a);
    if (std::isfinite(b)) d = std::min(d, b - x);
    for (double p : breakpoints)
        if (p != x) d = std::min(d, std::abs(x - p));
    const double h = std::max(1e-4 * d, 1e-12);
    return ((*this)(x + h) - (*this)(x - h)) / (2.0 * h);
}

PointFunction distance_power(double a, double b, double exponent) {
    if (!(a < b)) throw DomainError("distance_power needs a < b");
    PointFunction f;
    f.a = a;
    f.b = b;
    f.boundary_exponent = exponent;
    const double mid = 0.5 * (a + b);
    f.breakpoints = {mid};
    f.evaluator = [a, b, exponent](double x) { return std::pow(std::min(x - a, b - x), exponent); };
    f.derivative = [a, b, mid, exponent](double x) {
        const double d = std::min(x - a, b - x);
        const double g = exponent * std::pow(d, exponent - 1.0);
        return x < mid ? g : -g;
    };
    return f;
}

PointFunction smooth_bump(double center, double radius, double height) {
    if (!(radius > 0.0)) throw DomainError("bump radius must be positive");
    PointFunction f;
    f.a = center - radius;
    f.b = center + radius;
    f.boundary_exponent = 2.0;  // flat to all orders; any exponent above 2 order works
    f.evaluator = [=](double x) {
        const double z = (x - center) / radius;
        const double q = (1.0 - z) * (1.0 + z);
        return q > 0.0 ? height * std::exp(-1.0 / q) : 0.0;
    };
    f.derivative = [=](double x) {
        const double z = (x - center) / radius;
        const double q = (1.0 - z) * (1.0 + z);
        if (!(q > 0.0)) return 0.0;
        return height * std::exp(-1.0 / q) * (-2.0 * z / (q * q)) / radius;
    };
    return f;
}

PointFunction truncated_power(double rho0, double s) {
    if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    PointFunction f;
    f.a = 0.0;
    f.b = kInf;
    f.boundary_exponent = s;
    f.breakpoints = {rho0};
    const double cap = std::pow(rho0, s);
    f.evaluator = [=](double x) { return x < rho0 ? std::pow(x, s) : cap; };
    f.derivative = [=](double x) { return x < rho0 ? s * std::pow(x, s - 1.0) : 0.0; };
    return f;
}

// ---------------------------------------------------------------- pointwise operator

double frac_lap_point(const PointFunction& u, double order, double x, const PointOptions& opts) {
    check_order(order);
    if (!std::isfinite(x)) throw DomainError("evaluation point must be finite");
    const double two_s = 2.0 * order;
    const double c = specfun::frac_lap_normalization(1, order);
    const auto feats = features_of(u);
    const LocalShape sh = local_shape(feats, u, x);
    const double ux = u(x);

    if (!sh.outside && !(sh.gamma > two_s))
        throw DomainError("principal value does not exist at this point for the given order");

    auto diff = [&](double r) { return 2.0 * ux - u(x + r) - u(x - r); };
    auto integrand = [&](double r) { return diff(r) * kernel_pow(r, 1.0 + two_s); };

    // The cancellation in 2u(x) - u(x+r) - u(x-r) swamps the integrand for
    // tiny r, so (0, eps) is replaced by a two-term model fitted at eps, eps/2.
    double eps = 0.0;
    double excised = 0.0;
    if (!sh.outside) {
        const bool smooth = sh.gamma == 2.0;
        eps = (smooth ? 1e-2 : 1e-4) * sh.scale;
        const double g1 = sh.gamma;
        const double g2 = smooth ? 4.0 : sh.gamma + 1.0;
        const double d1 = diff(eps), d2 = diff(0.5 * eps);
        // d(r) ~ alpha (r/eps)^g1 + beta (r/eps)^g2
        const double p1 = std::pow(0.5, g1), p2 = std::pow(0.5, g2);
        const double beta = (d2 - p1 * d1) / (p2 - p1);
        const double alpha = d1 - beta;
        const double scale = std::pow(eps, -two_s);
        excised = scale * (alpha / (g1 - two_s) + beta / (g2 - two_s));
    }

    std::vector<quad::SingularitySpec> sings;
    push_feature_points(feats, x, eps, sings);
    const auto qo = quad_options(opts, c);

    double body = 0.0, tail = 0.0;
    if (u.compact()) {
        const double R = feature_radius(feats, x);
        if (R > eps) body = quad::integrate_adaptive(integrand, eps, R, sings, qo).value;
        tail = ux * std::pow(std::max(R, eps), -two_s) / order;
    } else {
        const double R = std::max({2.0 * feature_radius(feats, x), 2.0 * eps, 1.0});
        if (R > eps) body = quad::integrate_adaptive(integrand, eps, R, sings, qo).value;
        tail = quad::integrate_halfline(integrand, R, 1.0 + two_s, {}, qo).value;
    }
    return c * (excised + body + tail);
}

double i_s_bilinear(const PointFunction& w1, const PointFunction& w2, double order, double x,
                    const PointOptions& opts) {
    check_order(order);
    const double two_s = 2.0 * order;
    const double c = specfun::frac_lap_normalization(1, order);
    auto f1 = features_of(w1), f2 = features_of(w2);
    const LocalShape s1 = local_shape(f1, w1, x), s2 = local_shape(f2, w2, x);
    const double g1 = s1.outside ? 2.0 : std::min(s1.gamma, 1.0);
    const double g2 = s2.outside ? 2.0 : std::min(s2.gamma, 1.0);
    const double beta0 = g1 + g2 - 1.0 - two_s;
    if (!(beta0 > -1.0)) throw DomainError("principal value does not exist at this point for the given order");

    const double a1 = w1(x), a2 = w2(x);
    auto integrand = [&](double r) {
        const double p = (a1 - w1(x + r)) * (a2 - w2(x + r));
        const double m = (a1 - w1(x - r)) * (a2 - w2(x - r));
        return (p + m) * kernel_pow(r, 1.0 + two_s);
    };

    std::vector<Feature> feats = f1;
    feats.insert(feats.end(), f2.begin(), f2.end());
    std::vector<quad::SingularitySpec> sings;
    sings.push_back(quad::SingularitySpec::algebraic_at(0.0, std::min(beta0, 0.0)));
    push_feature_points(feats, x, 0.0, sings);
    const auto qo = quad_options(opts, c);

    double body = 0.0, tail = 0.0;
    const double R = feature_radius(feats, x);
    if (w1.compact() && w2.compact()) {
        if (R > 0.0) body = quad::integrate_adaptive(integrand, 0.0, R, sings, qo).value;
        tail = a1 * a2 * std::pow(R, -two_s) / order;
    } else {
        const double Rt = std::max({2.0 * R, 1.0});
        body = quad::integrate_adaptive(integrand, 0.0, Rt, sings, qo).value;
        tail = quad::integrate_halfline(integrand, Rt, 1.0 + two_s, {}, qo).value;
    }
    return c * (body + tail);
}

double frac_lap_piecewise_linear(const std::vector<double>& nodes, const std::vector<double>& values,
                                 double order, double x) {
    check_order(order);
    if (nodes.size() != values.size() || nodes.size() < 2) throw DomainError("nodes/values mismatch");
    const std::size_t n = nodes.size();
    std::vector<double> slope(n + 1, 0.0);  // slope[k]: on (x_{k-1}, x_k); zero outside
    for (std::size_t k = 1; k < n; ++k) slope[k] = (values[k] - values[k - 1]) / (nodes[k] - nodes[k - 1]);
    // Outside the node range the function is zero, so the end values must be zero too.
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double d = slope[k + 1] - slope[k];
        if (d == 0.0) continue;
        const double r = nodes[k] - x;
        if (r == 0.0) {
            if (order >= 0.5) return d > 0 ? kInf : -kInf;
            acc += d * (-1.0 / (1.0 - 2.0 * order));
            continue;
        }
        acc += d * e_kernel(r, order);
    }
    return specfun::frac_lap_normalization(1, order) / (2.0 * order) * acc;
}

// ---------------------------------------------------------------- truncated power probe

double trunc_phi_singular_part(double rho0, double s, double x) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    if (!(rho0 > 0.0)) throw DomainError("rho0 must be positive");
    if (x == 0.0) throw DomainError("J is logarithmically singular at 0");
    if (!(std::abs(x) <= 0.5 * rho0)) throw DomainError("x must satisfy |x| <= rho0/2");
    const double Z = rho0 / std::abs(x);
    const quad::Options qo{1e-14, 1e-14, 1'000'000};
    if (x > 0.0) {
        auto folded = [s](double r) {
            return (-std::expm1(s * std::log1p(-r)) - std::expm1(s * std::log1p(r))) / std::pow(r, 1.0 + s);
        };
        const std::array<quad::SingularitySpec, 2> fs = {quad::SingularitySpec::algebraic_at(0.0, 1.0 - s),
                                                         quad::SingularitySpec::algebraic_at(1.0, s)};
        double j = 1.0 / s + quad::integrate_adaptive(folded, 0.0, 1.0, fs, qo).value;
        if (Z > 2.0) {
            auto far = [s](double v) {
                const double z = std::exp(v);
                return -std::expm1(s * v) * z / std::pow(std::expm1(v), 1.0 + s);
            };
            j += quad::integrate_adaptive(far, std::log(2.0), std::log(Z), {}, qo).value;
        }
        return j;
    }
    auto near = [s](double z) { return std::pow(z, s) / std::pow(1.0 + z, 1.0 + s); };
    const std::array<quad::SingularitySpec, 1> ns = {quad::SingularitySpec::algebraic_at(0.0, s)};
    double j = quad::integrate_adaptive(near, 0.0, std::min(1.0, Z), ns, qo).value;
    if (Z > 1.0) {
        auto far = [s](double v) {
            const double z = std::exp(v);
            return std::exp(s * v) * z / std::pow(1.0 + z, 1.0 + s);
        };
        j += quad::integrate_adaptive(far, 0.0, std::log(Z), {}, qo).value;
    }
    return -j;
}

double half_lap_trunc_phi(double rho0, double s, double x) {
    const double j = trunc_phi_singular_part(rho0, s, x);
    const double xp = x > 0.0 ? std::pow(x, s) : 0.0;
    const double tail = (xp - std::pow(rho0, s)) * std::pow(rho0 - x, -s) / s;
    return specfun::frac_lap_normalization(1, 0.5 * s) * (j + tail);
}

// ---------------------------------------------------------------- matrix

Eigen::VectorXd FracLapMatrix::apply(const Eigen::VectorXd& interior_values) const {
    if (interior_values.size() != stiffness.cols()) throw DomainError("vector size does not match the matrix");
    return (stiffness * interior_values).cwiseQuotient(lumped_mass);
}

FracLapMatrix assemble_matrix(const GridFunction1D& grid_template, double order) {
    check_order(order);
    grid_template.validate();
    const auto& x = grid_template.nodes;
    const std::size_t cells = x.size() - 1;
    if (cells < 9) throw DomainError("grid too coarse: need at least 8 interior nodes");
    const std::size_t n = cells - 1;
    const double s = order;
    const double c = specfun::frac_lap_normalization(1, s);
    const double near_pref = c / (2.0 * s);
    const double kexp = 1.0 + 2.0 * s;

    FracLapMatrix m;
    m.order = s;
    m.a = grid_template.a;
    m.b = grid_template.b;
    m.nodes = x;
    m.stiffness.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    m.lumped_mass.resize(static_cast<Eigen::Index>(n));

    // Hat i (interior index 0..n-1) sits on node i+1.
    std::vector<std::array<double, 3>> dw(n);
    std::vector<double> width(n);
    std::vector<HatRule> r2(n), r4(n), r8(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double xl = x[i], xc = x[i + 1], xr = x[i + 2];
        const double hl = xc - xl, hr = xr - xc;
        dw[i] = {1.0 / hl, -1.0 / hl - 1.0 / hr, 1.0 / hr};
        width[i] = xr - xl;
        m.lumped_mass[static_cast<Eigen::Index>(i)] = 0.5 * (hl + hr);
        r2[i] = hat_rule(xl, xc, xr, kGL2x, kGL2w);
        r4[i] = hat_rule(xl, xc, xr, kGL4x, kGL4w);
        r8[i] = hat_rule(xl, xc, xr, kGL8x, kGL8w);
    }

    auto entry = [&](std::size_t i, std::size_t j) {
        // j >= i
        const double gap = x[j] - x[i + 2];
        const double ratio = gap / std::max(width[i], width[j]);
        if (ratio < 2.0) {
            double acc = 0.0;
            for (int p = 0; p < 3; ++p)
                for (int q = 0; q < 3; ++q)
                    acc += dw[i][static_cast<std::size_t>(p)] * dw[j][static_cast<std::size_t>(q)] *
                           g2_kernel(x[i + static_cast<std::size_t>(p)] - x[j + static_cast<std::size_t>(q)], s);
            return near_pref * acc;
        }
        const auto& ri = ratio >= 128.0 ? r2[i] : ratio >= 8.0 ? r4[i] : r8[i];
        const auto& rj = ratio >= 128.0 ? r2[j] : ratio >= 8.0 ? r4[j] : r8[j];
        double acc = 0.0;
        for (std::size_t p = 0; p < ri.x.size(); ++p) {
            double row = 0.0;
            for (std::size_t q = 0; q < rj.x.size(); ++q) row += rj.w[q] * kernel_pow(rj.x[q] - ri.x[p], kexp);
            acc += ri.w[p] * row;
        }
        return -c * acc;
    };

    auto fill_rows = [&](std::size_t worker, std::size_t workers) {
        for (std::size_t i = worker; i < n; i += workers)
            for (std::size_t j = i; j < n; ++j)
                m.stiffness(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = entry(i, j);
    };
    const std::size_t workers = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);
    if (workers == 1 || n < 256) {
        fill_rows(0, 1);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(fill_rows, w, workers);
        for (auto& t : pool) t.join();
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            m.stiffness(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                m.stiffness(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    return m;
}

// ---------------------------------------------------------------- export

namespace {
constexpr char kMagic[8] = {'F', 'R', 'A', 'C', 'P', 'O', 'H', 'M'};

void write_row(std::ostream& out, const double* v, Eigen::Index len) {
    for (Eigen::Index k = 0; k < len; ++k) {
        if (k) out << ',';
        put_double(out, v[k]);
    }
    out << '\n';
}
}  // namespace

void write_matrix_csv(const FracLapMatrix& m, std::ostream& out) {
    const Eigen::Index n = m.interior_size();
    out << "# N=" << n << " s=";
    put_double(out, m.order);
    out << " a=";
    put_double(out, m.a);
    out << " b=";
    put_double(out, m.b);
    out << '\n';
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = m.stiffness(i, j);
        write_row(out, row.data(), n);
    }
    out << "# lumped_mass\n";
    write_row(out, m.lumped_mass.data(), n);
    out << "# nodes\n";
    write_row(out, m.nodes.data(), static_cast<Eigen::Index>(m.nodes.size()));
}

void write_matrix_binary(const FracLapMatrix& m, std::ostream& out) {
    const std::uint64_t n = static_cast<std::uint64_t>(m.interior_size());
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    const double hdr[3] = {m.order, m.a, m.b};
    out.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
    for (Eigen::Index i = 0; i < m.interior_size(); ++i)
        for (Eigen::Index j = 0; j < m.interior_size(); ++j) {
            const double v = m.stiffness(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof v);
        }
    out.write(reinterpret_cast<const char*>(m.lumped_mass.data()), static_cast<std::streamsize>(n * sizeof(double)));
    out.write(reinterpret_cast<const char*>(m.nodes.data()),
              static_cast<std::streamsize>(m.nodes.size() * sizeof(double)));
}

FracLapMatrix read_matrix_binary(std::istream& in) {
    char magic[8];
    std::uint64_t n = 0;
    double hdr[3];
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw DomainError("not a matrix dump");
    if (!in.read(reinterpret_cast<char*>(&n), sizeof n) || !in.read(reinterpret_cast<char*>(hdr), sizeof hdr))
        throw DomainError("truncated matrix dump");
    if (n == 0 || n > (1u << 16)) throw DomainError("implausible matrix size");
    FracLapMatrix m;
    m.order = hdr[0];
    m.a = hdr[1];
    m.b = hdr[2];
    const auto N = static_cast<Eigen::Index>(n);
    m.stiffness.resize(N, N);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j) {
            double v;
            if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw DomainError("truncated matrix dump");
            m.stiffness(i, j) = v;
        }
    m.lumped_mass.resize(N);
    m.nodes.resize(n + 2);
    if (!in.read(reinterpret_cast<char*>(m.lumped_mass.data()), static_cast<std::streamsize>(n * sizeof(double))) ||
        !in.read(reinterpret_cast<char*>(m.nodes.data()), static_cast<std::streamsize>((n + 2) * sizeof(double))))
        throw DomainError("truncated matrix dump");
    return m;
}

}  // namespace fracpoh::fraclap
