#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cli.hpp"
#include "fracpoh/errors.hpp"

namespace {

const char* kFooter = R"(CSV columns (--format csv):
  constants       s,c1,c2,c3,c_ns_1d_s,c_ns_1d_half_s,c2_quad,c2_error
  hyp2f1          s,limit,expected,error,extrapolation_error
  verify-ball     s,N,pointwise_max_error,matrix_max_error
  solve           s,N,x,u                 (one row per node)
  pohozaev-check  s,N,lhs,rhs,rel_residual
  trace-fit       s,probe,c_log,jump,log_slope_rel_error,jump_rel_error
  scaling         lambda,quotient         (last row: lambda = 1, extrapolant)

Tolerances (--tol name=value):
  constants c2 | hyp2f1 limit, gauss | verify-ball pointwise, matrix
  solve newton | pohozaev-check rel_residual, bilinear
  trace-fit log_slope, jump | scaling rel

Exit status: 0 all tolerances met, 1 a tolerance failed (report still
written), 2 configuration error.)";

}  // namespace

int main(int argc, char** argv) {
    using fracpoh::cli::RunConfig;
    CLI::App app{"Fractional Laplacian Pohozaev toolkit"};
    app.footer(kFooter);
    app.set_config("--config", "", "TOML/INI config file, options under a [subcommand] section; command-line flags win");
    app.require_subcommand(1);

    RunConfig cfg;
    std::vector<std::string> tols;
    double ha = 0, hb = 0, hc = 0, hz = 0;

    for (const auto& name : fracpoh::cli::kSubcommands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->fallthrough();
        sub->add_option("--s", cfg.s, "order s in (0,1); comma list for a sweep")->delimiter(',');
        sub->add_option("--N", cfg.N, "grid cells; comma list for a sweep")->delimiter(',');
        sub->add_option("--tol", tols, "tolerance override name=value (repeatable)");
        sub->add_option("--f,--nonlinearity", cfg.nonlinearity,
                        "const[:c=], power:p=[,c=], affine:eps=, xpower:p=,eps=");
        sub->add_option("--output,-o", cfg.output, "report path (default stdout)");
        sub->add_option("--format", cfg.format, "json or csv");
        sub->add_option("--jobs", cfg.jobs, "worker threads (0: all cores)");
        sub->add_option("--init-scale", cfg.init_scale, "scale of the linear initial guess");
        sub->add_option("--max-iter", cfg.max_iter, "Newton iteration cap");
        sub->add_option("--damping", cfg.damping, "Newton damping in (0,1]");
        sub->add_option("--A", cfg.A, "log amplitude of the scaling profile");
        sub->add_option("--B", cfg.B, "jump amplitude of the scaling profile");
        sub->add_option("--a", ha, "hyp2f1 point: a");
        sub->add_option("--b", hb, "hyp2f1 point: b");
        sub->add_option("--c", hc, "hyp2f1 point: c");
        sub->add_option("--z", hz, "hyp2f1 point: z");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.subcommand = sub->get_name();
    if (sub->count("--a")) cfg.ha = ha;
    if (sub->count("--b")) cfg.hb = hb;
    if (sub->count("--c")) cfg.hc = hc;
    if (sub->count("--z")) cfg.hz = hz;
    for (const auto& t : tols) {
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "config error: tol: expected name=value, got '" << t << "'\n";
            return 2;
        }
        try {
            std::size_t used = 0;
            const std::string val = t.substr(eq + 1);
            cfg.tolerances[t.substr(0, eq)] = std::stod(val, &used);
            if (used != val.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            std::cerr << "config error: tol: bad value in '" << t << "'\n";
            return 2;
        }
    }
    return fracpoh::cli::run(cfg, std::cout, std::cerr);
}
