#include <doctest.h>

#include <cmath>

#include "fracpoh/errors.hpp"
#include "fracpoh/quad.hpp"

using namespace fracpoh;
using quad::SingularitySpec;

namespace {
const double kPi = 3.14159265358979323846;
}

TEST_CASE("smooth integrand") {
    const auto r = quad::integrate_adaptive([](double x) { return std::exp(x); }, 0.0, 1.0, {}, 1e-13);
    CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
    CHECK(r.evaluations > 0);
}

TEST_CASE("algebraic endpoint singularity") {
    // int_0^1 x^-0.7 = 1/0.3
    const SingularitySpec sp[] = {SingularitySpec::algebraic_at(0.0, -0.7)};
    const auto r = quad::integrate_adaptive([](double x) { return std::pow(x, -0.7); }, 0.0, 1.0, sp, 1e-12);
    CHECK(std::abs(r.value - 1.0 / 0.3) < 1e-11);
}

TEST_CASE("interior algebraic and log singularities") {
    const SingularitySpec a[] = {SingularitySpec::algebraic_at(0.0, -0.5)};
    const auto r =
        quad::integrate_adaptive([](double x) { return 1.0 / std::sqrt(std::abs(x)); }, -1.0, 2.0, a, 1e-12);
    CHECK(std::abs(r.value - (2.0 + 2.0 * std::sqrt(2.0))) < 1e-11);

    // Off the origin the location itself rounds, which caps the attainable accuracy.
    const SingularitySpec b[] = {SingularitySpec::algebraic_at(0.3, -0.5)};
    const auto q = quad::integrate_adaptive([](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); }, 0.0, 1.0,
                                            b, 1e-9);
    CHECK(std::abs(q.value - 2.0 * (std::sqrt(0.3) + std::sqrt(0.7))) < 1e-8);

    const SingularitySpec l[] = {SingularitySpec::log_at(0.0)};
    const auto g = quad::integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0, l, 1e-12);
    CHECK(std::abs(g.value + 1.0) < 1e-11);
}

TEST_CASE("principal value") {
    // PV int_{-1}^{2} dx / x = log 2
    const auto r = quad::integrate_pv([](double x) { return 1.0 / x; }, 0.0, -1.0, 2.0, 1e-12);
    CHECK(std::abs(r.value - std::log(2.0)) < 1e-10);
    // PV int_0^1 e^x / (x - 1/2) = e^{1/2} (Ei(1/2) - Ei(-1/2))
    const auto pv = quad::integrate_pv([](double x) { return std::exp(x) / (x - 0.5); }, 0.5, 0.0, 1.0, 1e-12);
    CHECK(std::abs(pv.value - 1.6717926512070333) < 1e-10);
}

TEST_CASE("half line") {
    const auto r = quad::integrate_halfline([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 2.0, 1e-12);
    CHECK(std::abs(r.value - kPi / 2.0) < 1e-10);
    const auto p = quad::integrate_halfline([](double x) { return std::pow(x, -1.5); }, 1.0, 1.5, 1e-12);
    CHECK(std::abs(p.value - 2.0) < 1e-10);
}

TEST_CASE("linearity and additivity") {
    auto f = [](double x) { return std::sin(3.0 * x) / std::sqrt(x); };
    auto g = [](double x) { return std::log(x) * x; };
    const SingularitySpec sp[] = {SingularitySpec::algebraic_at(0.0, -0.5)};
    const double tol = 1e-11;
    const double If = quad::integrate_adaptive(f, 0.0, 2.0, sp, tol).value;
    const double Ig = quad::integrate_adaptive(g, 0.0, 2.0, sp, tol).value;
    const double Ih =
        quad::integrate_adaptive([&](double x) { return 2.0 * f(x) - 3.0 * g(x); }, 0.0, 2.0, sp, tol).value;
    CHECK(std::abs(Ih - (2.0 * If - 3.0 * Ig)) <= 2.0 * tol * 5.0);

    const double left = quad::integrate_adaptive(f, 0.0, 0.7, sp, tol).value;
    const double right = quad::integrate_adaptive(f, 0.7, 2.0, {}, tol).value;
    CHECK(std::abs(left + right - If) <= 2.0 * tol);
}

TEST_CASE("halving tol does not worsen the error") {
    const SingularitySpec sp[] = {SingularitySpec::algebraic_at(0.0, -0.5), SingularitySpec::algebraic_at(1.0, 0.3)};
    auto f = [](double x) { return std::pow(x, -0.5) * std::pow(1.0 - x, 0.3); };
    const double ref = std::tgamma(0.5) * std::tgamma(1.3) / std::tgamma(1.8);
    double prev = 1e300;
    for (double tol = 1e-6; tol >= 1e-13; tol /= 2.0) {
        const double err = std::abs(quad::integrate_adaptive(f, 0.0, 1.0, sp, tol).value - ref);
        CHECK(err <= std::max(prev, 1e-15));
        prev = err;
    }
}

TEST_CASE("budget exhaustion raises AccuracyError") {
    quad::Options o;
    o.abs_tol = 1e-14;
    o.max_evaluations = 50;
    CHECK_THROWS_AS(quad::integrate_adaptive([](double x) { return std::sin(200.0 * x); }, 0.0, 10.0, {}, o),
                    AccuracyError);
}

TEST_CASE("bad arguments") {
    CHECK_THROWS_AS(quad::integrate_adaptive([](double) { return 1.0; }, 1.0, 0.0, {}, 1e-10), DomainError);
    CHECK_THROWS_AS(quad::integrate_halfline([](double) { return 1.0; }, 0.0, 1.0, 1e-10), DomainError);
}

TEST_CASE("deterministic") {
    const SingularitySpec sp[] = {SingularitySpec::log_at(0.5)};
    auto f = [](double x) { return std::log(std::abs(x - 0.5)) * std::cos(x); };
    const double a = quad::integrate_adaptive(f, 0.0, 1.0, sp, 1e-12).value;
    const double b = quad::integrate_adaptive(f, 0.0, 1.0, sp, 1e-12).value;
    CHECK(a == b);
}
