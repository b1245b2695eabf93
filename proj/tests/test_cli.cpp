#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "fracpoh/errors.hpp"

using namespace fracpoh;
using cli::RunConfig;

namespace {

RunConfig config(const std::string& sub) {
    RunConfig c;
    c.subcommand = sub;
    c.jobs = 2;
    return c;
}

std::string error_of(const RunConfig& c) {
    try {
        c.validate();
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("validation names the offending field") {
    auto c = config("constants");
    CHECK(error_of(c).empty());
    c.s = {1.2};
    CHECK(error_of(c).rfind("s:", 0) == 0);
    c = config("constants");
    c.N = {8};
    CHECK(error_of(c).rfind("N:", 0) == 0);
    c = config("constants");
    c.format = "xml";
    CHECK(error_of(c).rfind("format:", 0) == 0);
    c = config("constants");
    c.tolerances["newton"] = 1e-3;
    CHECK(error_of(c).rfind("tol:", 0) == 0);
    c = config("constants");
    c.tolerances["c2"] = -1.0;
    CHECK(error_of(c).rfind("tol:", 0) == 0);
    c = config("solve");
    c.damping = 0.0;
    CHECK(error_of(c).rfind("damping:", 0) == 0);
    c = config("hyp2f1");
    c.ha = 1.0;
    CHECK(error_of(c).rfind("hyp2f1:", 0) == 0);
    c = config("frobnicate");
    CHECK(error_of(c).rfind("subcommand:", 0) == 0);
    c = config("solve");
    c.nonlinearity = "cubic";
    CHECK_FALSE(error_of(c).empty());
}

TEST_CASE("tolerance tables and columns") {
    for (const auto& sub : cli::kSubcommands) {
        CHECK_FALSE(cli::default_tolerances(sub).empty());
        CHECK_FALSE(cli::csv_columns(sub).empty());
    }
    CHECK(cli::csv_columns("pohozaev-check") == std::vector<std::string>{"s", "N", "lhs", "rhs", "rel_residual"});
    CHECK(cli::default_tolerances("constants").at("c2") == 1e-8);
    CHECK_THROWS_AS(cli::default_tolerances("nope"), ConfigError);
}

TEST_CASE("constants run is deterministic and embeds its config") {
    auto c = config("constants");
    c.s = {0.25, 0.5, 0.75};
    const auto a = cli::execute(c);
    c.jobs = 1;
    const auto b = cli::execute(c);
    CHECK(a.exit_code == 0);
    CHECK(a.report["results"].dump() == b.report["results"].dump());
    CHECK(a.csv == b.csv);
    CHECK(a.report["schema_version"] == report::kSchemaVersion);
    CHECK(a.report["config"]["tolerances"]["c2"] == 1e-8);
    CHECK(a.report["results"].size() == 3);
    CHECK(a.report["results"][1]["s"] == 0.5);
}

TEST_CASE("tolerance failures give exit code 1, config errors 2") {
    auto c = config("constants");
    c.tolerances["c2"] = 1e-300;
    const auto r = cli::execute(c);
    CHECK(r.exit_code == 1);
    CHECK(r.report["passed"] == false);

    std::ostringstream out, diag;
    CHECK(cli::run(c, out, diag) == 1);
    CHECK_FALSE(out.str().empty());
    c.s = {0.0};
    CHECK(cli::run(c, out, diag) == 2);
    CHECK(diag.str().find("config error: s:") != std::string::npos);
}

TEST_CASE("csv output of a sweep") {
    auto c = config("scaling");
    c.A = 0.0;
    c.B = 1.0;
    c.format = "csv";
    const auto r = cli::execute(c);
    CHECK(r.exit_code == 0);
    std::istringstream in(r.csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "lambda,quotient");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 10);
}

TEST_CASE("pohozaev-check on the constant source") {
    auto c = config("pohozaev-check");
    c.N = {256};
    const auto r = cli::execute(c);
    CHECK(r.exit_code == 0);
    const auto& e = r.report["results"][0];
    CHECK(e.contains("identity_analytic"));
    CHECK(e.contains("bilinear"));
    CHECK(e["criticality"]["classification"] == "subcritical");
}
