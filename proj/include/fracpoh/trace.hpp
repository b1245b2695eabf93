#pragma once

// Boundary trace u/delta^s and the log-plus-jump expansion of (-Delta)^{s/2} u
// near an endpoint.

#include <cstddef>
#include <functional>
#include <vector>

#include "fracpoh/fraclap.hpp"

namespace fracpoh::trace {

struct TraceFit {
    double boundary_point = 0.0;
    double q_value = 0.0;      // limit of u/delta^s
    std::size_t fit_order = 0; // number of dyadic samples entering the fit
    double residual = 0.0;     // max deviation of the fitted model
    double alpha = 1.0;        // fitted exponent of the corrector c delta^alpha
};

struct LogJumpFit {
    double boundary_point = 0.0;
    double c_log = 0.0;
    double offset_in = 0.0;
    double offset_out = 0.0;
    double amplitude = 0.0;  // c_log / c1(s)
    double residual = 0.0;
    double alpha = 1.0;

    double jump() const { return offset_in - offset_out; }
};

struct TraceOptions {
    std::size_t num_samples = 12;
    double delta0 = 0.1;
    double delta_floor = 1e-6;
    /// Grid functions only: ignore the first `skip_cells` cells at the boundary,
    /// where the discrete solution is least accurate. Reduced on coarse grids
    /// until at least 5 dyadic samples remain.
    std::size_t skip_cells = 8;
};

/// Fits u(x_k)/delta_k^s ~ q + c delta_k^alpha on delta_k = delta0 2^-k.
/// boundary_point must be a finite support end of u. Throws ExtractionError
/// on diverging or non-monotone ratios.
TraceFit extract_trace(const fraclap::PointFunction& u, double s, double boundary_point,
                       const TraceOptions& opts = {});
TraceFit extract_trace(const fraclap::GridFunction1D& u, double s, double boundary_point,
                       const TraceOptions& opts = {});

/// Fit of the ratios themselves; exposed for reuse on precomputed samples.
TraceFit fit_ratio_limit(const std::vector<double>& deltas, const std::vector<double>& ratios,
                         double boundary_point);

/// Joint least squares on mirrored samples boundary_point -/+ delta_k:
///   w = c_log log(delta) + offset_in  + beta_in  delta^alpha   (inside)
///   w = c_log log(delta) + offset_out + beta_out delta^alpha   (outside)
/// Throws ExtractionError when the design matrix is rank deficient.
LogJumpFit fit_log_jump(const std::function<double(double)>& w, double s, double boundary_point, double a,
                        double b, std::size_t num_samples = 10, double delta0 = 0.1);

/// Same fit on precomputed samples (deltas with inside and outside values).
LogJumpFit fit_log_jump_samples(const std::vector<double>& deltas, const std::vector<double>& inside,
                                const std::vector<double>& outside, double s, double boundary_point);

}  // namespace fracpoh::trace
