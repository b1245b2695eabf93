#include "fracpoh/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

namespace fracpoh::report {

namespace {

// JSON has no inf/nan; write them as strings rather than null.
Json num(double v) {
    if (std::isfinite(v)) return v;
    if (std::isnan(v)) return "nan";
    return v > 0 ? "inf" : "-inf";
}

}  // namespace

Json to_json(const specfun::FracConstants& c) {
    Json j;
    j["s"] = num(c.s);
    j["c1"] = num(c.c1);
    j["c2"] = num(c.c2);
    j["c3"] = num(c.c3);
    j["c_ns_1d_s"] = num(c.c_ns_1d_s);
    j["c_ns_1d_half_s"] = num(c.c_ns_1d_half_s);
    return j;
}

Json to_json(const trace::TraceFit& t) {
    Json j;
    j["boundary_point"] = num(t.boundary_point);
    j["q_value"] = num(t.q_value);
    j["fit_order"] = t.fit_order;
    j["residual"] = num(t.residual);
    return j;
}

Json to_json(const trace::LogJumpFit& f) {
    Json j;
    j["boundary_point"] = num(f.boundary_point);
    j["c_log"] = num(f.c_log);
    j["offset_in"] = num(f.offset_in);
    j["offset_out"] = num(f.offset_out);
    j["amplitude"] = num(f.amplitude);
    j["residual"] = num(f.residual);
    return j;
}

Json to_json(const scalingop::FrakIEstimate& e) {
    Json j;
    j["value"] = num(e.value);
    j["lambda_ladder"] = Json::array();
    for (double v : e.lambda_ladder) j["lambda_ladder"].push_back(num(v));
    j["raw_quotients"] = Json::array();
    for (double v : e.raw_quotients) j["raw_quotients"].push_back(num(v));
    j["extrapolation_error"] = num(e.extrapolation_error);
    return j;
}

Json to_json(const pohozaev::PohozaevReport& r) {
    Json j;
    j["s"] = num(r.s);
    j["n"] = r.n;
    j["term_ufu"] = num(r.term_ufu);
    j["term_F"] = num(r.term_F);
    j["term_Fx"] = num(r.term_Fx);
    j["boundary_sum"] = num(r.boundary_sum);
    j["lhs"] = num(r.lhs);
    j["rhs"] = num(r.rhs);
    j["abs_residual"] = num(r.abs_residual);
    j["rel_residual"] = num(r.rel_residual);
    return j;
}

Json to_json(const pohozaev::BilinearReport& r) {
    Json j;
    j["lhs"] = num(r.lhs);
    j["rhs"] = num(r.rhs);
    j["residual"] = num(r.residual);
    j["boundary"] = num(r.boundary);
    return j;
}

Json to_json(const pohozaev::EnergyReport& r) {
    Json j;
    j["seminorm_sq"] = num(r.seminorm_sq);
    j["energy"] = num(r.energy);
    return j;
}

Json to_json(const pohozaev::CriticalityVerdict& v) {
    Json j;
    j["classification"] = pohozaev::to_string(v.classification);
    j["witness"] = v.witness ? num(*v.witness) : Json(nullptr);
    return j;
}

Json solution_sidecar(const solver::Solution& sol) {
    Json j;
    j["s"] = num(sol.s);
    j["N"] = sol.grid.cells();
    j["residual"] = num(sol.final_residual);
    j["iterations"] = sol.newton_iterations;
    if (sol.has_traces)
        j["traces"] = Json::array({to_json(sol.trace_a), to_json(sol.trace_b)});
    else
        j["traces"] = nullptr;
    return j;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << fmt(row[k]);
        out << '\n';
    }
}

void write_pohozaev_batch_csv(std::ostream& out, const std::vector<PohozaevRow>& rows) {
    out << "s,N,lhs,rhs,rel_residual\n";
    for (const auto& r : rows)
        out << fmt(r.s) << ',' << r.N << ',' << fmt(r.report.lhs) << ',' << fmt(r.report.rhs) << ','
            << fmt(r.report.rel_residual) << '\n';
}

}  // namespace fracpoh::report
