#include "fracpoh/scalingop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fracpoh/errors.hpp"
#include "fracpoh/quad.hpp"
#include "fracpoh/specfun.hpp"

namespace fracpoh::scalingop {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A function on [0, inf) with its non-smooth points.
struct HalfLineFn {
    std::function<double(double)> f;
    std::vector<quad::SingularitySpec> points;
    double sup = 0.0;  // f vanishes beyond
    double tail_decay = 0.0;
};

void add_point_function(const fraclap::PointFunction& h, std::vector<quad::SingularitySpec>& pts) {
    const double beta = h.boundary_exponent < 1.0 ? h.boundary_exponent : 0.0;
    if (std::isfinite(h.a) && h.a > 0.0) pts.push_back(quad::SingularitySpec::algebraic_at(h.a, beta));
    if (std::isfinite(h.b) && h.b > 0.0) pts.push_back(quad::SingularitySpec::algebraic_at(h.b, beta));
    for (double p : h.breakpoints)
        if (p > 0.0 && p > h.a && p < h.b) pts.push_back(quad::SingularitySpec::breakpoint_at(p));
}

HalfLineFn from_profile(const LogJumpProfile& w) {
    HalfLineFn out;
    out.f = [&w](double t) { return w(t); };
    if (w.A != 0.0) {
        out.points.push_back(quad::SingularitySpec::log_at(1.0));
        out.points.push_back(quad::SingularitySpec::breakpoint_at(2.0));
        out.sup = 2.0;
    }
    if (w.B != 0.0) {
        if (w.A == 0.0) out.points.push_back(quad::SingularitySpec::breakpoint_at(1.0));
        out.sup = std::max(out.sup, 1.0);
    }
    if (w.h) {
        add_point_function(*w.h, out.points);
        out.sup = std::max(out.sup, w.h->b);
        if (!std::isfinite(w.h->b)) {
            if (!(w.h->tail_decay > 1.0)) throw DomainError("unbounded remainder needs tail_decay > 1");
            out.tail_decay = w.h->tail_decay;
        }
    }
    return out;
}

HalfLineFn from_point_function(const fraclap::PointFunction& w) {
    HalfLineFn out;
    out.f = [&w](double t) { return w(t); };
    add_point_function(w, out.points);
    out.sup = w.b;
    if (!(out.sup > 0.0)) out.sup = 0.0;
    if (!std::isfinite(w.b)) {
        if (!(w.tail_decay > 0.5)) throw DomainError("unbounded function needs tail_decay > 1/2");
        out.tail_decay = w.tail_decay;
    }
    return out;
}

quad::SingularitySpec scaled(const quad::SingularitySpec& p, double factor) {
    quad::SingularitySpec q = p;
    q.location *= factor;
    return q;
}

// Keeps one spec per location, preferring log over algebraic over plain breakpoints.
std::vector<quad::SingularitySpec> merge_points(std::vector<quad::SingularitySpec> pts, double lo, double hi) {
    std::vector<quad::SingularitySpec> in;
    for (const auto& p : pts)
        if (p.location >= lo && p.location <= hi) in.push_back(p);
    std::sort(in.begin(), in.end(), [](const auto& x, const auto& y) { return x.location < y.location; });
    auto rank = [](const quad::SingularitySpec& p) {
        if (p.kind == quad::SingularityKind::log) return 0;
        return p.exponent != 0.0 ? 1 : 2;
    };
    std::vector<quad::SingularitySpec> out;
    for (const auto& p : in) {
        if (!out.empty() && std::abs(out.back().location - p.location) <= 1e-15 * std::max(1.0, p.location)) {
            if (rank(p) < rank(out.back()) ||
                (rank(p) == 1 && rank(out.back()) == 1 && p.exponent < out.back().exponent))
                out.back() = {out.back().location, p.kind, p.exponent};
            continue;
        }
        out.push_back(p);
    }
    return out;
}

// int_0^inf w1(lambda t) w2(t / lambda) dt
double cross_integral(const HalfLineFn& w1, const HalfLineFn& w2, double lambda, double tol) {
    const double upper = std::min(w1.sup / lambda, w2.sup * lambda);
    if (!(upper > 0.0)) return 0.0;
    std::vector<quad::SingularitySpec> pts;
    for (const auto& p : w1.points) pts.push_back(scaled(p, 1.0 / lambda));
    for (const auto& p : w2.points) pts.push_back(scaled(p, lambda));
    auto g = [&](double t) { return w1.f(lambda * t) * w2.f(t / lambda); };
    const quad::Options qo{tol, tol, 1'000'000};
    if (std::isfinite(upper)) {
        const auto sp = merge_points(pts, 0.0, upper);
        return quad::integrate_adaptive(g, 0.0, upper, sp, qo).value;
    }
    double cut = 1.0;
    for (const auto& p : pts) cut = std::max(cut, 2.0 * p.location);
    const auto sp = merge_points(pts, 0.0, cut);
    const double decay = (w1.tail_decay > 0 ? w1.tail_decay : 0.0) + (w2.tail_decay > 0 ? w2.tail_decay : 0.0);
    if (!(decay > 1.0)) throw DomainError("product tail does not decay fast enough");
    return quad::integrate_adaptive(g, 0.0, cut, sp, qo).value +
           quad::integrate_halfline(g, cut, decay, {}, qo).value;
}

void check_lambda(double lambda) {
    if (!(lambda >= 1.0) || !std::isfinite(lambda)) throw DomainError("lambda must be >= 1");
}

// x log|x| with the removable zero handled.
double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(std::abs(x)); }

}  // namespace

double LogJumpProfile::operator()(double t) const {
    double v = 0.0;
    if (A != 0.0 && t >= 0.0) {
        // t rounding onto 1 is a distance below resolution, not a true pole hit.
        const double d = std::max(std::abs(t - 1.0), 0x1p-60);
        if (d < 1.0) v += A * std::log(d);
    }
    if (B != 0.0 && t >= 0.0 && t <= 1.0) v += B;
    if (h) v += (*h)(t);
    return v;
}

std::vector<double> default_ladder() {
    std::vector<double> l;
    for (int k = 4; k <= 12; ++k) l.push_back(1.0 + std::ldexp(1.0, -k));
    return l;
}

double i_lambda(const LogJumpProfile& w, double lambda, double tol) {
    check_lambda(lambda);
    const HalfLineFn f = from_profile(w);
    return cross_integral(f, f, lambda, tol);
}

double i_lambda(const fraclap::PointFunction& w, double lambda, double tol) {
    check_lambda(lambda);
    const HalfLineFn f = from_point_function(w);
    return cross_integral(f, f, lambda, tol);
}

double theta_lambda(double lambda, double t) {
    const double il = 1.0 / lambda;
    const double m = (lambda * lambda - 1.0) / lambda;
    const double u = lambda * t - 1.0;   // L1 = log|u|
    const double v = t / lambda - 1.0;   // L2 = log|v|
    double res = 2.0 * t - xlogx(u) / lambda;
    if (v != 0.0) {
        const double l2 = std::log(std::abs(v));
        const double l1_part = u == 0.0 ? 0.0 : (t - il) * std::log(std::abs(u));
        res += (l1_part + (lambda - t) - m * std::log(lambda * lambda - 1.0)) * l2;
    }
    res -= m * specfun::psi_primitive(lambda * (lambda - t) / (lambda * lambda - 1.0));
    return res;
}

double i_lambda_log_closed(double lambda) {
    if (!(lambda > 1.0 && lambda < 2.0)) throw DomainError("closed form needs lambda in (1, 2)");
    return theta_lambda(lambda, 2.0 / lambda) - theta_lambda(lambda, 0.0) - 4.0;
}

FrakIEstimate frak_i_estimate(const LogJumpProfile& w, const std::vector<double>& ladder) {
    if (ladder.size() < 4) throw DomainError("ladder needs at least 4 entries");
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        if (!(ladder[k] > 1.0 && ladder[k] <= 1.5)) throw DomainError("ladder values must lie in (1, 1.5]");
        if (k > 0 && !(ladder[k] < ladder[k - 1])) throw DomainError("ladder must decrease toward 1");
    }
    const HalfLineFn f = from_profile(w);
    const double tol = 1e-13;
    const double i1 = cross_integral(f, f, 1.0, tol);
    FrakIEstimate est;
    est.lambda_ladder = ladder;
    for (double l : ladder) est.raw_quotients.push_back(-(cross_integral(f, f, l, tol) - i1) / (l - 1.0));

    const auto& q = est.raw_quotients;
    const std::size_t n = q.size();
    const double scale = std::max(1.0, std::abs(q.back()));
    const double first = std::abs(q[1] - q[0]), last = std::abs(q[n - 1] - q[n - 2]);
    if (last > std::max(first, 1e-8 * scale)) throw ConvergenceError("difference quotients are not Cauchy");

    // Repeated Richardson with the rate read off consecutive differences.
    std::vector<double> h(n);
    for (std::size_t k = 0; k < n; ++k) h[k] = ladder[k] - 1.0;
    std::vector<double> level = q;
    for (int pass = 0; pass < 2 && level.size() >= 3; ++pass) {
        std::vector<double> next;
        const std::size_t off = n - level.size();
        for (std::size_t k = 1; k < level.size(); ++k) {
            const double r = h[off + k - 1] / h[off + k];
            double p = 1.0;
            if (k >= 2) {
                const double d0 = level[k - 1] - level[k - 2], d1 = level[k] - level[k - 1];
                if (d1 != 0.0 && d0 / d1 > 0.0) {
                    const double pf = std::log(d0 / d1) / std::log(r);
                    if (pf > 0.3 && pf < 4.0) p = pf;
                }
            }
            next.push_back(level[k] + (level[k] - level[k - 1]) / (std::pow(r, p) - 1.0));
        }
        level = std::move(next);
    }
    est.value = level.back();
    est.extrapolation_error = level.size() >= 2 ? std::abs(level.back() - level[level.size() - 2]) : 0.0;
    return est;
}

double lambda_form(const LogJumpProfile& w1, const LogJumpProfile& w2, double lambda, double tol) {
    if (!(lambda > 1.0)) throw DomainError("lambda form needs lambda > 1");
    const HalfLineFn f1 = from_profile(w1), f2 = from_profile(w2);
    const double a = cross_integral(f1, f2, lambda, tol);
    const double b = cross_integral(f2, f1, lambda, tol);
    const double c = cross_integral(f1, f2, 1.0, tol);
    return -(a + b - 2.0 * c) / (2.0 * (lambda - 1.0));
}

}  // namespace fracpoh::scalingop
