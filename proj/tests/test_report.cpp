#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "fracpoh/report.hpp"

using namespace fracpoh;

TEST_CASE("constants serialize with fixed keys") {
    const auto j = report::to_json(specfun::frac_constants(0.5));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"s", "c1", "c2", "c3", "c_ns_1d_s", "c_ns_1d_half_s"});
    CHECK(j["s"].get<double>() == 0.5);
    CHECK(j["c3"].get<double>() == specfun::frac_constants(0.5).c3);
}

TEST_CASE("non-finite numbers become strings") {
    pohozaev::PohozaevReport r{};
    r.lhs = std::numeric_limits<double>::quiet_NaN();
    r.rhs = std::numeric_limits<double>::infinity();
    r.rel_residual = -std::numeric_limits<double>::infinity();
    const auto j = report::to_json(r);
    CHECK(j["lhs"] == "nan");
    CHECK(j["rhs"] == "inf");
    CHECK(j["rel_residual"] == "-inf");
    CHECK(j.dump().find("null") == std::string::npos);

    pohozaev::CriticalityVerdict v;
    v.classification = pohozaev::Criticality::critical;
    const auto jv = report::to_json(v);
    CHECK(jv["classification"] == "critical");
    CHECK(jv["witness"].is_null());
}

TEST_CASE("shortest round-trip formatting") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02214076e23, 5e-324}) {
        const auto t = report::fmt(v);
        CHECK(std::strtod(t.c_str(), nullptr) == v);
    }
    CHECK(report::fmt(0.5) == "0.5");
    CHECK(report::fmt(std::nan("")) == "nan");
    CHECK(report::fmt(-HUGE_VAL) == "-inf");
}

TEST_CASE("csv writers") {
    std::ostringstream a;
    report::write_csv(a, {"x", "y"}, {{1.0, 0.25}, {2.0, -3.0}});
    CHECK(a.str() == "x,y\n1,0.25\n2,-3\n");

    pohozaev::PohozaevReport r{};
    r.lhs = 1.5;
    r.rhs = 1.25;
    r.rel_residual = 0.5;
    std::ostringstream b;
    report::write_pohozaev_batch_csv(b, {{0.5, 256, r}});
    CHECK(b.str() == "s,N,lhs,rhs,rel_residual\n0.5,256,1.5,1.25,0.5\n");
}

TEST_CASE("solution sidecar is deterministic") {
    solver::SolveConfig cfg;
    cfg.N = 64;
    const auto problem = solver::make_problem("const", 0.5);
    const auto j1 = report::solution_sidecar(solver::solve_semilinear(problem, cfg));
    const auto j2 = report::solution_sidecar(solver::solve_semilinear(problem, cfg));
    CHECK(j1.dump() == j2.dump());
    CHECK(j1["N"] == 64);
    REQUIRE(j1["traces"].is_array());
    CHECK(j1["traces"].size() == 2);
}
