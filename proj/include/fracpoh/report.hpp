#pragma once

// JSON and CSV serialization of the result types. Key order is fixed and
// numbers are written in shortest round-trip form, so equal inputs give
// byte-identical output.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracpoh/pohozaev.hpp"
#include "fracpoh/scalingop.hpp"
#include "fracpoh/solver.hpp"
#include "fracpoh/specfun.hpp"
#include "fracpoh/trace.hpp"

namespace fracpoh::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json to_json(const specfun::FracConstants& c);
Json to_json(const trace::TraceFit& t);
Json to_json(const trace::LogJumpFit& f);
Json to_json(const scalingop::FrakIEstimate& e);
Json to_json(const pohozaev::PohozaevReport& r);
Json to_json(const pohozaev::BilinearReport& r);
Json to_json(const pohozaev::EnergyReport& r);
Json to_json(const pohozaev::CriticalityVerdict& v);
/// Sidecar for a solution: s, N, residual, iterations, traces.
Json solution_sidecar(const solver::Solution& sol);

/// Locale-independent shortest round-trip decimal.
std::string fmt(double v);

/// Writes a CSV table with a header row.
void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct PohozaevRow {
    double s;
    std::size_t N;
    pohozaev::PohozaevReport report;
};
/// Columns s,N,lhs,rhs,rel_residual.
void write_pohozaev_batch_csv(std::ostream& out, const std::vector<PohozaevRow>& rows);

}  // namespace fracpoh::report
