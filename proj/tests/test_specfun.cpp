#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fracpoh/errors.hpp"
#include "fracpoh/specfun.hpp"

using namespace fracpoh;

namespace {
const double kPi = 3.14159265358979323846;

double li2_series(double t) {
    double sum = 0.0, p = t;
    for (int k = 1; k < 400; ++k, p *= t) sum += p / (static_cast<double>(k) * k);
    return sum;
}
}  // namespace

TEST_CASE("gamma against the C library") {
    for (double x : {0.1, 0.5, 1.0, 1.7, 3.3, 7.25, 15.5, -0.5, -2.3})
        CHECK(specfun::gamma(x) == doctest::Approx(std::tgamma(x)).epsilon(1e-13));
    CHECK(specfun::log_gamma(50.5) == doctest::Approx(std::lgamma(50.5)).epsilon(1e-14));
    CHECK(specfun::rgamma(-3.0) == 0.0);
    CHECK(specfun::digamma(1.0) == doctest::Approx(-0.57721566490153286).epsilon(1e-13));
    CHECK(specfun::digamma(0.5) == doctest::Approx(-0.57721566490153286 - 2.0 * std::log(2.0)).epsilon(1e-13));
}

TEST_CASE("gamma reflection and duplication") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.001, 0.999);
    for (int k = 0; k < 100; ++k) {
        const double z = u(rng);
        CHECK(std::abs(specfun::gamma(z) * specfun::gamma(1.0 - z) - kPi / std::sin(kPi * z)) <=
              1e-11 * kPi / std::sin(kPi * z));
        const double lhs = specfun::gamma(z) * specfun::gamma(z + 0.5);
        const double rhs = std::pow(2.0, 1.0 - 2.0 * z) * std::sqrt(kPi) * specfun::gamma(2.0 * z);
        CHECK(std::abs(lhs - rhs) <= 1e-11 * std::abs(rhs));
    }
}

TEST_CASE("constants relation for random s") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int k = 0; k < 100; ++k) {
        const double s = u(rng);
        const auto c = specfun::frac_constants(s);
        const double g2 = std::pow(std::tgamma(1.0 + s), 2);
        CHECK(c.c1 > 0.0);
        CHECK(c.c2 > 0.0);
        CHECK(std::abs(c.c3 - c.c1 * c.c1 * (kPi * kPi + c.c2 * c.c2)) <= 1e-12 * c.c3);
        CHECK(std::abs(c.c3 - g2) <= 1e-12 * g2);
    }
}

TEST_CASE("c2 limits on a log grid") {
    double prev = 1e300;
    for (int k = 1; k <= 40; ++k) {
        const double s = std::pow(10.0, -4.0 + 4.0 * k / 41.0);  // 1e-4 .. 0.8
        const double c2 = specfun::frac_constants(s).c2;
        CHECK(c2 < prev);
        prev = c2;
    }
    CHECK(specfun::frac_constants(1e-4).c2 > 1e4);
    CHECK(specfun::frac_constants(1.0 - 1e-6).c2 < 1e-5);
}

TEST_CASE("c2 by quadrature") {
    for (double s : {0.05, 0.1, 0.25, 0.5, 0.75, 0.9, 0.95})
        CHECK(std::abs(specfun::c2_by_quadrature(s) - kPi / std::tan(kPi * s / 2.0)) <= 1e-8);
    CHECK_THROWS_AS(specfun::c2_by_quadrature(1.0), DomainError);
}

TEST_CASE("normalization constant") {
    for (double s : {0.2, 0.5, 0.8}) {
        const double ref = s * std::pow(4.0, s) * std::tgamma(0.5 + s) / (std::sqrt(kPi) * std::tgamma(1.0 - s));
        CHECK(specfun::frac_lap_normalization(1, s) == doctest::Approx(ref).epsilon(1e-13));
    }
    CHECK(specfun::frac_lap_normalization(1, 0.5) == doctest::Approx(1.0 / kPi).epsilon(1e-14));
    CHECK_THROWS_AS(specfun::frac_lap_normalization(0, 0.5), DomainError);
}

TEST_CASE("dilogarithm and its log primitive") {
    CHECK(specfun::dilog(1.0) == doctest::Approx(kPi * kPi / 6.0).epsilon(1e-14));
    CHECK(specfun::dilog(-1.0) == doctest::Approx(-kPi * kPi / 12.0).epsilon(1e-14));
    const double l2 = std::log(2.0);
    CHECK(specfun::dilog(0.5) == doctest::Approx(kPi * kPi / 12.0 - 0.5 * l2 * l2).epsilon(1e-14));
    for (double t : {-3.0, -0.7, 0.2, 0.45, 0.8, 0.99})
        if (std::abs(t) < 0.9) CHECK(specfun::dilog(t) == doctest::Approx(li2_series(t)).epsilon(1e-13));
    // Psi = -Li2 below 1, -Re Li2 above, with Re Li2(t) = pi^2/3 - log^2 t / 2 - Li2(1/t).
    for (double t : {0.3, 0.9})
        CHECK(specfun::psi_primitive(t) == doctest::Approx(-specfun::dilog(t)).epsilon(1e-13));
    for (double t : {1.5, 2.0, 3.0, 8.0}) {
        const double lt = std::log(t);
        const double re = kPi * kPi / 3.0 - 0.5 * lt * lt - li2_series(1.0 / t);
        CHECK(std::abs(specfun::psi_primitive(t) + re) < 1e-11);
    }
}

TEST_CASE("hyp2f1 closed forms") {
    for (double z : {-0.9, -0.2, 0.1, 0.5, 0.7, 0.95, 0.999}) {
        CHECK(specfun::hyp2f1(1.0, 1.0, 2.0, z) == doctest::Approx(-std::log1p(-z) / z).epsilon(1e-12));
        CHECK(specfun::hyp2f1(0.3, 1.7, 1.7, z) == doctest::Approx(std::pow(1.0 - z, -0.3)).epsilon(1e-12));
        CHECK(specfun::hyp2f1(0.5, 0.5, 1.5, z * z) ==
              doctest::Approx(std::asin(std::abs(z)) / std::abs(z)).epsilon(1e-12));
    }
    CHECK(specfun::hyp2f1(-3.0, 2.0, 1.5, 0.8) ==
          doctest::Approx(1.0 - 3.0 * 2.0 / 1.5 * 0.8 + 3.0 * 2.0 * 3.0 / (1.5 * 2.5) * 0.64 -
                          1.0 * 2.0 * 3.0 * 4.0 / (1.5 * 2.5 * 3.5) * 0.512)
              .epsilon(1e-13));
}

TEST_CASE("hyp2f1 at one: gamma quotient and Euler integral") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const double b = 0.05 + 2.5 * u(rng), c = b + 0.05 + 2.5 * u(rng);
        const double a = -2.0 + (c - b - 0.05 + 2.0) * u(rng);
        const double g = std::tgamma(c) * std::tgamma(c - a - b) / (std::tgamma(c - a) * std::tgamma(c - b));
        CHECK(std::abs(specfun::hyp2f1(a, b, c, 1.0) - g) <= 1e-10 * std::max(1.0, std::abs(g)));
        CHECK(std::abs(specfun::hyp2f1_unit_by_quadrature(a, b, c) - g) <= 1e-10 * std::max(1.0, std::abs(g)));
    }
}

TEST_CASE("hyp2f1 contiguity derivative") {
    for (double s : {0.25, 0.5, 0.75})
        for (double x : {0.2, 0.6, 0.9}) {
            const double h = 1e-3 * (1.0 - x);
            auto F = [s](double t) { return specfun::hyp2f1(1.0, 1.0, 2.0 + s, t); };
            const double d = (F(x - 2 * h) - 8 * F(x - h) + 8 * F(x + h) - F(x + 2 * h)) / (12 * h);
            CHECK(std::abs(d - specfun::hyp2f1(2.0, 2.0, 3.0 + s, x) / (2.0 + s)) < 1e-8);
        }
}

TEST_CASE("hyp2f1 errors") {
    CHECK_THROWS_AS(specfun::hyp2f1(1.0, 1.0, -2.0, 0.3), DomainError);
    CHECK_THROWS_AS(specfun::hyp2f1(1.0, 1.0, 1.5, 1.0), DivergenceError);
    CHECK_THROWS_AS(specfun::hyp2f1(1.0, 1.0, 2.5, 1.5), DomainError);
    CHECK_THROWS_AS(specfun::hyp2f1_unit_by_quadrature(1.0, -0.5, 2.0), DomainError);
}

TEST_CASE("endpoint limit") {
    for (double s : {0.25, 0.5, 0.75}) {
        const auto lim = specfun::hyp2f1_endpoint_limit(s);
        CHECK(std::abs(lim.value + kPi / std::sin(kPi * s)) < 1e-3);
        CHECK(lim.error < 1e-3);
    }
}

TEST_CASE("richardson") {
    std::vector<double> v;
    for (int k = 0; k < 6; ++k) {
        const double h = std::pow(0.5, k);
        v.push_back(2.0 + 3.0 * h + 5.0 * h * h);
    }
    const double ex[] = {1.0, 2.0};
    const auto r = specfun::richardson(v, 2.0, ex);
    CHECK(std::abs(r.value - 2.0) < 1e-12);
}
