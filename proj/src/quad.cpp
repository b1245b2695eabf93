#include "fracpoh/quad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "fracpoh/errors.hpp"

namespace fracpoh::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kUflow = std::numeric_limits<double>::min();

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600302776721, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr double kLogPower = 4.0;
constexpr double kPolePower = 2.0;

struct Piece {
    std::size_t segment;
    double lo, hi;
    double value, error, resabs;
};

struct GkOut {
    double value, error, resabs;
};

// A segment is a map of [0,1] onto part of the integration range, already
// multiplied by the Jacobian.
using Segment = std::function<double(double)>;

class Engine {
public:
    Engine(const Integrand& f, const Options& opts) : f_(f), opts_(opts) {}

    double eval(double t) {
        ++evaluations_;
        const double y = f_(t);
        if (!std::isfinite(y)) {
            std::ostringstream os;
            os.precision(17);
            os << "integrand returned a non-finite value at t = " << t;
            throw EvaluationError(os.str());
        }
        return y;
    }

    void add_segment(Segment s) { segments_.push_back(std::move(s)); }

    QuadResult run();

private:
    GkOut gk21(std::size_t seg, double lo, double hi);

    const Integrand& f_;
    Options opts_;
    std::vector<Segment> segments_;
    std::size_t evaluations_ = 0;
};

GkOut Engine::gk21(std::size_t seg, double lo, double hi) {
    const Segment& g = segments_[seg];
    const double centr = 0.5 * (lo + hi);
    const double hlgth = 0.5 * (hi - lo);
    const double fc = g(centr);
    double resg = 0.0;
    double resk = kWgk[10] * fc;
    double resabs = std::abs(resk);
    double fv1[10], fv2[10];
    for (int j = 0; j < 5; ++j) {
        const int jtw = 2 * j + 1;
        const double absc = hlgth * kXgk[jtw];
        const double f1 = g(centr - absc);
        const double f2 = g(centr + absc);
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        resg += kWg[j] * (f1 + f2);
        resk += kWgk[jtw] * (f1 + f2);
        resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
    }
    for (int j = 0; j < 5; ++j) {
        const int jtwm1 = 2 * j;
        const double absc = hlgth * kXgk[jtwm1];
        const double f1 = g(centr - absc);
        const double f2 = g(centr + absc);
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        resk += kWgk[jtwm1] * (f1 + f2);
        resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
    }
    const double reskh = 0.5 * resk;
    double resasc = kWgk[10] * std::abs(fc - reskh);
    for (int j = 0; j < 10; ++j) {
        resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
    }
    const double result = resk * hlgth;
    resabs *= std::abs(hlgth);
    resasc *= std::abs(hlgth);
    double abserr = std::abs((resk - resg) * hlgth);
    if (resasc != 0.0 && abserr != 0.0) {
        abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
    }
    if (resabs > kUflow / (50.0 * kEps)) {
        abserr = std::max(50.0 * kEps * resabs, abserr);
    }
    return {result, abserr, resabs};
}

QuadResult Engine::run() {
    auto by_error = [](const Piece& x, const Piece& y) {
        if (x.error != y.error) return x.error < y.error;
        if (x.segment != y.segment) return x.segment > y.segment;
        return x.lo > y.lo;
    };
    std::vector<Piece> heap;
    std::vector<Piece> frozen;
    double total = 0.0, total_err = 0.0;
    for (std::size_t s = 0; s < segments_.size(); ++s) {
        const GkOut r = gk21(s, 0.0, 1.0);
        heap.push_back({s, 0.0, 1.0, r.value, r.error, r.resabs});
    }
    std::make_heap(heap.begin(), heap.end(), by_error);

    double floor = 0.0;
    for (const auto& p : heap) {
        total += p.value;
        total_err += p.error;
        floor += 50.0 * kEps * p.resabs;
    }

    // The running totals drift by roundoff of their largest past terms;
    // near convergence they are refreshed from the pieces themselves.
    auto refresh = [&] {
        total = total_err = floor = 0.0;
        for (const auto* v : {&heap, &frozen})
            for (const auto& p : *v) {
                total += p.value;
                total_err += p.error;
                floor += 50.0 * kEps * p.resabs;
            }
    };

    // Roundoff detection as in QUADPACK: bisections that leave the value
    // unchanged but do not shrink the error mean the integrand is noise at
    // that scale. Once flagged, an error within kRoundoffSlack of the target
    // is accepted instead of spending the whole budget.
    constexpr double kRoundoffSlack = 16.0;
    std::size_t roundoff_events = 0, growth_events = 0, bisections = 0;
    auto roundoff_limited = [&] { return roundoff_events >= 6 || growth_events >= 20; };
    auto converged = [&](double target) {
        const double goal = std::max(target, 2.0 * floor);
        return total_err <= goal || (roundoff_limited() && total_err <= kRoundoffSlack * goal);
    };

    bool exhausted = false;
    std::size_t since_refresh = 0;
    for (;;) {
        double target = std::max(opts_.abs_tol, opts_.rel_tol * std::abs(total));
        if (total_err < 64.0 * std::max(target, 2.0 * floor) && ++since_refresh >= 32) {
            refresh();
            since_refresh = 0;
            target = std::max(opts_.abs_tol, opts_.rel_tol * std::abs(total));
        }
        if (total_err <= target || total_err <= 2.0 * floor || heap.empty()) break;
        if (roundoff_limited() && converged(target)) {
            refresh();
            if (converged(std::max(opts_.abs_tol, opts_.rel_tol * std::abs(total)))) break;
        }
        if (evaluations_ + 42 > opts_.max_evaluations) {
            refresh();
            target = std::max(opts_.abs_tol, opts_.rel_tol * std::abs(total));
            if (converged(target)) break;
            exhausted = true;
            break;
        }
        std::pop_heap(heap.begin(), heap.end(), by_error);
        Piece worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi) || (worst.hi - worst.lo) < 64.0 * kEps) {
            frozen.push_back(worst);
            // Unsplittable: its error can no longer be reduced.
            if (heap.empty()) break;
            continue;
        }
        const GkOut left = gk21(worst.segment, worst.lo, mid);
        const GkOut right = gk21(worst.segment, mid, worst.hi);
        const double err12 = left.error + right.error, area12 = left.value + right.value;
        ++bisections;
        if (std::abs(worst.value - area12) <= 1e-5 * std::abs(area12) && err12 >= 0.99 * worst.error)
            ++roundoff_events;
        if (bisections > 10 && err12 > worst.error) ++growth_events;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        floor += 50.0 * kEps * (left.resabs + right.resabs - worst.resabs);
        heap.push_back({worst.segment, worst.lo, mid, left.value, left.error, left.resabs});
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back({worst.segment, mid, worst.hi, right.value, right.error, right.resabs});
        std::push_heap(heap.begin(), heap.end(), by_error);
    }

    // Fixed summation order: pieces sorted by position, compensated sum.
    std::vector<Piece> all = heap;
    all.insert(all.end(), frozen.begin(), frozen.end());
    std::sort(all.begin(), all.end(), [](const Piece& x, const Piece& y) {
        return x.segment != y.segment ? x.segment < y.segment : x.lo < y.lo;
    });
    double sum = 0.0, comp = 0.0, err = 0.0;
    for (const auto& p : all) {
        const double t = sum + p.value;
        comp += std::abs(sum) >= std::abs(p.value) ? (sum - t) + p.value : (p.value - t) + sum;
        sum = t;
        err += p.error;
    }
    sum += comp;
    QuadResult out{sum, err, evaluations_};
    if (exhausted) {
        std::ostringstream os;
        os << "quadrature budget of " << opts_.max_evaluations << " evaluations exhausted; estimate " << sum
           << " with error " << err;
        throw AccuracyError(os.str(), sum, err);
    }
    return out;
}

struct Node {
    double x;
    bool singular = false;
    bool pole = false;
    double power = 1.0;  // substitution power at this node
};

double substitution_power(const SingularitySpec& s) {
    switch (s.kind) {
        case SingularityKind::log:
            return kLogPower;
        case SingularityKind::algebraic:
            return s.exponent == 0.0 ? 1.0 : 2.0 / (1.0 + s.exponent);
        case SingularityKind::pv_pole:
            return kPolePower;
    }
    return 1.0;
}

// Piece with a singular left end: t = l + h w^m.
Segment left_singular(Engine& eng, double l, double h, double m) {
    return [&eng, l, h, m](double w) {
        const double wm1 = std::pow(w, m - 1.0);
        const double off = h * wm1 * w;
        const double t = l + off;
        if (off == 0.0 || t == l) return 0.0;
        return eng.eval(t) * h * m * wm1;
    };
}

Segment right_singular(Engine& eng, double r, double h, double m) {
    return [&eng, r, h, m](double w) {
        const double wm1 = std::pow(w, m - 1.0);
        const double off = h * wm1 * w;
        const double t = r - off;
        if (off == 0.0 || t == r) return 0.0;
        return eng.eval(t) * h * m * wm1;
    };
}

Segment plain(Engine& eng, double l, double h) {
    return [&eng, l, h](double w) { return eng.eval(l + h * w) * h; };
}

Segment paired(Engine& eng, double p, double rho, double m) {
    return [&eng, p, rho, m](double w) {
        const double wm1 = std::pow(w, m - 1.0);
        const double r = rho * wm1 * w;
        if (r == 0.0 || p + r == p || p - r == p) return 0.0;
        return (eng.eval(p + r) + eng.eval(p - r)) * rho * m * wm1;
    };
}

void validate_options(const Options& opts) {
    if (!(opts.abs_tol > 0.0) && !(opts.rel_tol > 0.0)) {
        throw DomainError("quadrature tolerance must be positive");
    }
    if (opts.max_evaluations < 21) throw DomainError("quadrature budget too small");
}

}  // namespace

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              std::span<const SingularitySpec> singularities, const Options& opts) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("integrate_adaptive requires finite a < b");
    }
    validate_options(opts);

    std::vector<Node> nodes{{a}, {b}};
    for (const auto& s : singularities) {
        if (!std::isfinite(s.location) || s.location < a || s.location > b) {
            throw DomainError("singularity location outside the integration range");
        }
        if (s.kind == SingularityKind::algebraic && !(s.exponent > -1.0)) {
            throw DomainError("algebraic singularity exponent must exceed -1");
        }
        if (s.kind == SingularityKind::pv_pole && !(s.location > a && s.location < b)) {
            throw DomainError("principal-value pole must be interior to the integration range");
        }
        Node n{s.location, s.kind != SingularityKind::algebraic || s.exponent != 0.0,
               s.kind == SingularityKind::pv_pole, substitution_power(s)};
        auto it = std::find_if(nodes.begin(), nodes.end(), [&](const Node& x) { return x.x == s.location; });
        if (it == nodes.end()) {
            nodes.push_back(n);
        } else if (n.pole || (n.singular && !it->pole && n.power > it->power)) {
            *it = n;
        }
    }
    std::sort(nodes.begin(), nodes.end(), [](const Node& x, const Node& y) { return x.x < y.x; });

    Engine eng(f, opts);
    // Intervals between consecutive nodes; poles shrink their neighbours.
    std::vector<double> left_edge(nodes.size()), right_edge(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        left_edge[i] = right_edge[i] = nodes[i].x;
        if (nodes[i].pole) {
            const double rho = 0.5 * std::min(nodes[i].x - nodes[i - 1].x, nodes[i + 1].x - nodes[i].x);
            left_edge[i] = nodes[i].x - rho;
            right_edge[i] = nodes[i].x + rho;
            eng.add_segment(paired(eng, nodes[i].x, rho, nodes[i].power));
        }
    }
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const double l = right_edge[i];
        const double r = left_edge[i + 1];
        if (!(r > l)) continue;
        const bool ls = nodes[i].singular && !nodes[i].pole;
        const bool rs = nodes[i + 1].singular && !nodes[i + 1].pole;
        if (ls && rs) {
            const double mid = 0.5 * (l + r);
            eng.add_segment(left_singular(eng, l, mid - l, nodes[i].power));
            eng.add_segment(right_singular(eng, r, r - mid, nodes[i + 1].power));
        } else if (ls) {
            eng.add_segment(left_singular(eng, l, r - l, nodes[i].power));
        } else if (rs) {
            eng.add_segment(right_singular(eng, r, r - l, nodes[i + 1].power));
        } else {
            eng.add_segment(plain(eng, l, r - l));
        }
    }
    return eng.run();
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              std::span<const SingularitySpec> singularities, double tol) {
    return integrate_adaptive(f, a, b, singularities, Options{tol, 0.0});
}

QuadResult integrate_pv(const Integrand& f, double pole, double a, double b,
                        std::span<const SingularitySpec> other_singularities, const Options& opts) {
    if (!(a < pole && pole < b)) throw DomainError("integrate_pv requires a < pole < b");
    std::vector<SingularitySpec> sings(other_singularities.begin(), other_singularities.end());
    sings.push_back(SingularitySpec::pole_at(pole));
    return integrate_adaptive(f, a, b, sings, opts);
}

QuadResult integrate_pv(const Integrand& f, double pole, double a, double b, double tol) {
    return integrate_pv(f, pole, a, b, {}, Options{tol, 0.0});
}

QuadResult integrate_halfline(const Integrand& f, double a, double decay_exponent,
                              std::span<const SingularitySpec> singularities, const Options& opts) {
    if (!std::isfinite(a)) throw DomainError("integrate_halfline requires a finite lower limit");
    if (!(decay_exponent > 1.0)) throw DomainError("integrate_halfline requires decay_exponent > 1");
    // y = 1/(1 + t - a) in (0, 1]; the tail sits at y = 0 where offsets are exact.
    std::vector<SingularitySpec> mapped;
    mapped.reserve(singularities.size() + 1);
    for (auto s : singularities) {
        if (!(s.location >= a) || !std::isfinite(s.location)) {
            throw DomainError("singularity location outside the integration range");
        }
        s.location = 1.0 / (1.0 + (s.location - a));
        mapped.push_back(s);
    }
    const double tail = decay_exponent - 2.0;
    mapped.push_back(std::abs(tail) < 1e-12 ? SingularitySpec::breakpoint_at(0.0)
                                            : SingularitySpec::algebraic_at(0.0, tail));
    auto g = [&f, a](double y) {
        if (y <= 0.0) return 0.0;
        return f(a + (1.0 - y) / y) / (y * y);
    };
    return integrate_adaptive(g, 0.0, 1.0, mapped, opts);
}

QuadResult integrate_halfline(const Integrand& f, double a, double decay_exponent, double tol) {
    return integrate_halfline(f, a, decay_exponent, {}, Options{tol, 0.0});
}

}  // namespace fracpoh::quad
