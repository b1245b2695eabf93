#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fracpoh/report.hpp"

namespace fracpoh::cli {

inline const std::vector<std::string> kSubcommands = {"constants", "hyp2f1",    "verify-ball", "solve",
                                                      "pohozaev-check", "trace-fit", "scaling"};

struct RunConfig {
    std::string subcommand;
    std::vector<double> s = {0.5};
    std::vector<std::size_t> N = {1024};
    std::map<std::string, double> tolerances;  // overrides of the per-subcommand defaults
    std::string nonlinearity = "const";
    std::string output;  // empty: stdout
    std::string format = "json";
    std::size_t jobs = 0;  // 0: hardware concurrency

    // solve / pohozaev-check
    double init_scale = 10.0;
    std::size_t max_iter = 50;
    double damping = 1.0;
    // scaling
    double A = 1.0;
    double B = 0.0;
    // hyp2f1 point evaluation
    std::optional<double> ha, hb, hc, hz;

    /// Throws ConfigError naming the offending field.
    void validate() const;
    report::Json to_json() const;
};

/// Default tolerances for a subcommand, by name.
std::map<std::string, double> default_tolerances(const std::string& subcommand);

/// Column layout of the CSV output for a subcommand.
std::vector<std::string> csv_columns(const std::string& subcommand);

struct RunResult {
    int exit_code = 0;  // 0 all tolerances met, 1 some failed
    report::Json report;
    std::string csv;
};

/// Runs the subcommand without touching the filesystem. Throws ConfigError
/// on an invalid configuration.
RunResult execute(const RunConfig& config);

/// execute() plus writing the report to config.output (or `fallback` when
/// empty). Returns the exit code; config errors map to 2.
int run(const RunConfig& config, std::ostream& fallback, std::ostream& diagnostics);

}  // namespace fracpoh::cli
