#include "fracpoh/trace.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "fracpoh/errors.hpp"
#include "fracpoh/specfun.hpp"

namespace fracpoh::trace {

namespace {

struct LsqResult {
    Eigen::VectorXd coef;
    double ssr = 0.0;
    double max_dev = 0.0;
    bool full_rank = true;
};

LsqResult solve_lsq(const Eigen::MatrixXd& A, const Eigen::VectorXd& y) {
    // Column scaling keeps the rank test meaningful for tiny delta^alpha columns.
    Eigen::VectorXd scale = A.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < scale.size(); ++j)
        if (scale[j] == 0.0) scale[j] = 1.0;
    const Eigen::MatrixXd As = A * scale.cwiseInverse().asDiagonal();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(As);
    qr.setThreshold(1e-12);
    LsqResult r;
    r.full_rank = qr.rank() == A.cols();
    r.coef = qr.solve(y).cwiseQuotient(scale);
    const Eigen::VectorXd res = A * r.coef - y;
    r.ssr = res.squaredNorm();
    r.max_dev = res.cwiseAbs().maxCoeff();
    return r;
}

// Minimizes the residual of build(alpha) over alpha in [0.05, 1]: coarse grid, then golden section.
template <class Build>
std::pair<double, LsqResult> fit_alpha(const Build& build, const Eigen::VectorXd& y) {
    double best_a = 0.05;
    LsqResult best = solve_lsq(build(best_a), y);
    for (int k = 2; k <= 20; ++k) {
        const double a = 0.05 * k;
        LsqResult r = solve_lsq(build(a), y);
        if (r.ssr < best.ssr) {
            best = r;
            best_a = a;
        }
    }
    double lo = std::max(0.05, best_a - 0.05), hi = std::min(1.0, best_a + 0.05);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = solve_lsq(build(x1), y).ssr, f2 = solve_lsq(build(x2), y).ssr;
    for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = solve_lsq(build(x1), y).ssr;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = solve_lsq(build(x2), y).ssr;
        }
    }
    const double am = 0.5 * (lo + hi);
    LsqResult rm = solve_lsq(build(am), y);
    if (rm.ssr < best.ssr) return {am, rm};
    return {best_a, best};
}

std::vector<double> dyadic_deltas(double delta0, std::size_t n, double floor) {
    std::vector<double> d;
    for (std::size_t k = 0; k < n; ++k) {
        const double v = delta0 * std::ldexp(1.0, -static_cast<int>(k));
        if (v < floor) break;
        d.push_back(v);
    }
    return d;
}

void check_ratio_shape(const std::vector<double>& r) {
    for (double v : r)
        if (!std::isfinite(v)) throw ExtractionError("non-finite trace ratio");
    const std::size_t n = r.size();
    std::vector<double> d(n - 1);
    double dmax = 0.0, rmax = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        d[k] = r[k + 1] - r[k];
        dmax = std::max(dmax, std::abs(d[k]));
    }
    for (double v : r) rmax = std::max(rmax, std::abs(v));
    const double noise = 1e-9 * std::max(rmax, 1e-300);
    if (dmax <= noise) return;

    // Geometric growth of the increments toward the boundary: ratio diverges.
    int growing = 0;
    for (std::size_t k = 1; k < d.size(); ++k) {
        if (std::abs(d[k]) > 1.05 * std::abs(d[k - 1]) && std::abs(d[k]) > noise)
            ++growing;
        else
            growing = 0;
    }
    if (growing >= 3 && std::abs(r.back()) > 1.5 * std::abs(r.front()))
        throw ExtractionError("trace ratios diverge toward the boundary (wrong s?)");

    double pos = 0.0, neg = 0.0;
    for (double v : d) (v > 0 ? pos : neg) += std::abs(v);
    const double minority_sign = pos >= neg ? -1.0 : 1.0;
    for (double v : d)
        if (v * minority_sign > 0.0 && std::abs(v) > std::max(0.25 * dmax, noise))
            throw ExtractionError("trace ratios are not monotone");
}

double c1_of(double s) { return specfun::gamma(1.0 + s) * std::sin(specfun::kPi * s / 2.0) / specfun::kPi; }

}  // namespace

TraceFit fit_ratio_limit(const std::vector<double>& deltas, const std::vector<double>& ratios,
                         double boundary_point) {
    if (deltas.size() != ratios.size()) throw ExtractionError("deltas and ratios differ in length");
    if (ratios.size() < 4) throw ExtractionError("need at least 4 samples to extract a trace");
    check_ratio_shape(ratios);
    const auto n = static_cast<Eigen::Index>(ratios.size());
    Eigen::VectorXd y(n);
    for (Eigen::Index k = 0; k < n; ++k) y[k] = ratios[static_cast<std::size_t>(k)];
    TraceFit fit;
    fit.boundary_point = boundary_point;
    fit.fit_order = ratios.size();
    const double spread = y.maxCoeff() - y.minCoeff();
    if (spread <= 1e-14 * std::max(1.0, y.cwiseAbs().maxCoeff())) {
        fit.q_value = y.mean();
        fit.residual = (y.array() - fit.q_value).abs().maxCoeff();
        return fit;
    }
    auto build = [&](double alpha) {
        Eigen::MatrixXd A(n, 2);
        for (Eigen::Index k = 0; k < n; ++k) {
            A(k, 0) = 1.0;
            A(k, 1) = std::pow(deltas[static_cast<std::size_t>(k)], alpha);
        }
        return A;
    };
    auto [alpha, r] = fit_alpha(build, y);
    fit.q_value = r.coef[0];
    fit.residual = r.max_dev;
    fit.alpha = alpha;
    if (!std::isfinite(fit.q_value)) throw ExtractionError("trace fit produced a non-finite limit");
    return fit;
}

TraceFit extract_trace(const fraclap::PointFunction& u, double s, double boundary_point, const TraceOptions& opts) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    if (opts.num_samples < 4) throw DomainError("num_samples must be at least 4");
    double dir;
    if (boundary_point == u.b && std::isfinite(u.b))
        dir = -1.0;
    else if (boundary_point == u.a && std::isfinite(u.a))
        dir = 1.0;
    else
        throw DomainError("boundary point is not a finite support end");
    const auto deltas = dyadic_deltas(opts.delta0, opts.num_samples, opts.delta_floor);
    std::vector<double> ratios;
    for (double d : deltas) ratios.push_back(u(boundary_point + dir * d) / std::pow(d, s));
    return fit_ratio_limit(deltas, ratios, boundary_point);
}

TraceFit extract_trace(const fraclap::GridFunction1D& u, double s, double boundary_point, const TraceOptions& opts) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    if (opts.num_samples < 4) throw DomainError("num_samples must be at least 4");
    u.validate();
    const std::size_t n = u.size();
    // Node ratios ordered by increasing delta from the chosen end.
    std::vector<double> nd, nr;
    const std::size_t half = n / 2;
    if (boundary_point == u.b) {
        for (std::size_t j = n - 2; j + 1 > n - half; --j) {
            nd.push_back(u.b - u.nodes[j]);
            nr.push_back(u.values[j] / std::pow(u.b - u.nodes[j], s));
        }
    } else if (boundary_point == u.a) {
        for (std::size_t j = 1; j < half; ++j) {
            nd.push_back(u.nodes[j] - u.a);
            nr.push_back(u.values[j] / std::pow(u.nodes[j] - u.a, s));
        }
    } else {
        throw DomainError("boundary point is not a grid endpoint");
    }
    // Coarse grids cannot afford the full skip; shrink it until 5 samples fit.
    std::size_t skip = std::min(opts.skip_cells, nd.size() > 2 ? nd.size() - 2 : 0);
    std::vector<double> deltas;
    for (;; --skip) {
        const double floor = std::max(opts.delta_floor, skip > 0 ? nd[skip - 1] : 0.0);
        deltas = dyadic_deltas(opts.delta0, opts.num_samples, floor);
        if (deltas.size() >= std::min<std::size_t>(5, opts.num_samples) || skip == 0) break;
    }
    std::vector<double> ratios;
    for (double d : deltas) {
        if (d > nd.back()) throw DomainError("delta0 exceeds half the interval");
        auto it = std::lower_bound(nd.begin(), nd.end(), d);
        const std::size_t k = static_cast<std::size_t>(it - nd.begin());
        if (nd[k] == d || k == 0) {
            ratios.push_back(nr[k]);
            continue;
        }
        const double t = (d - nd[k - 1]) / (nd[k] - nd[k - 1]);
        ratios.push_back(nr[k - 1] * (1.0 - t) + nr[k] * t);
    }
    return fit_ratio_limit(deltas, ratios, boundary_point);
}

LogJumpFit fit_log_jump_samples(const std::vector<double>& deltas, const std::vector<double>& inside,
                                const std::vector<double>& outside, double s, double boundary_point) {
    const std::size_t k = deltas.size();
    if (inside.size() != k || outside.size() != k) throw ExtractionError("sample lengths differ");
    if (k < 6) throw ExtractionError("need at least 6 samples per side");
    const auto n = static_cast<Eigen::Index>(k);
    Eigen::VectorXd y(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y[i] = inside[static_cast<std::size_t>(i)];
        y[n + i] = outside[static_cast<std::size_t>(i)];
    }
    if (!y.allFinite()) throw ExtractionError("non-finite sample in log-jump fit");
    auto build = [&](double alpha) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n, 5);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = deltas[static_cast<std::size_t>(i)];
            const double l = std::log(d), p = std::pow(d, alpha);
            A(i, 0) = l;
            A(i, 1) = 1.0;
            A(i, 3) = p;
            A(n + i, 0) = l;
            A(n + i, 2) = 1.0;
            A(n + i, 4) = p;
        }
        return A;
    };
    auto [alpha, r] = fit_alpha(build, y);
    if (!r.full_rank) throw ExtractionError("log-jump fit is rank deficient");
    LogJumpFit fit;
    fit.boundary_point = boundary_point;
    fit.c_log = r.coef[0];
    fit.offset_in = r.coef[1];
    fit.offset_out = r.coef[2];
    fit.amplitude = fit.c_log / c1_of(s);
    fit.residual = r.max_dev;
    fit.alpha = alpha;
    return fit;
}

LogJumpFit fit_log_jump(const std::function<double(double)>& w, double s, double boundary_point, double a, double b,
                        std::size_t num_samples, double delta0) {
    if (!(s > 0.0 && s < 1.0)) throw DomainError("s must lie in (0, 1)");
    if (num_samples < 6) throw DomainError("num_samples must be at least 6");
    double dir;
    if (boundary_point == b)
        dir = -1.0;
    else if (boundary_point == a)
        dir = 1.0;
    else
        throw DomainError("boundary point is not an interval end");
    if (!(delta0 < 0.5 * (b - a))) throw DomainError("delta0 must be below half the interval");
    const auto deltas = dyadic_deltas(delta0, num_samples, 1e-6);
    std::vector<double> in, out;
    for (double d : deltas) {
        in.push_back(w(boundary_point + dir * d));
        out.push_back(w(boundary_point - dir * d));
    }
    return fit_log_jump_samples(deltas, in, out, s, boundary_point);
}

}  // namespace fracpoh::trace
