#pragma once

// The dilation derivative
//   frakI(w) = -d/dlambda|_{1+} int_0^inf w(lambda t) w(t/lambda) dt
// for profiles w = A log^-|t-1| + B chi_[0,1] + h on the half-line.

#include <optional>
#include <vector>

#include "fracpoh/fraclap.hpp"

namespace fracpoh::scalingop {

struct LogJumpProfile {
    double A = 0.0;
    double B = 0.0;
    /// Remainder on [0, inf); its support end b may be infinite, in which
    /// case tail_decay must exceed 1.
    std::optional<fraclap::PointFunction> h;

    double operator()(double t) const;
};

struct FrakIEstimate {
    double value = 0.0;
    std::vector<double> lambda_ladder;
    std::vector<double> raw_quotients;
    double extrapolation_error = 0.0;
};

/// Default ladder 1 + 2^-k, k = 4..12.
std::vector<double> default_ladder();

/// I_lambda = int_0^inf w(lambda t) w(t/lambda) dt.
double i_lambda(const LogJumpProfile& w, double lambda, double tol = 1e-13);
/// Same for a general function on the half-line (values for t < 0 are ignored).
double i_lambda(const fraclap::PointFunction& w, double lambda, double tol = 1e-13);

/// Primitive theta_lambda of log|lambda t - 1| log|t/lambda - 1| used for the pure-log profile.
double theta_lambda(double lambda, double t);

/// Closed form of I_lambda - I_1 for w = log^-|t-1|, lambda in (1, 2).
double i_lambda_log_closed(double lambda);

/// Raw quotients -(I_lambda - I_1)/(lambda - 1) on the ladder and their
/// Richardson limit. Throws ConvergenceError when the quotients drift apart.
FrakIEstimate frak_i_estimate(const LogJumpProfile& w, const std::vector<double>& ladder = default_ladder());

/// The symmetric lambda-form
///   (w1, w2)_lambda = -1/(2(lambda-1)) int_0^inf [w1(lt) w2(t/l) + w1(t/l) w2(lt) - 2 w1 w2] dt
/// whose diagonal is the quotient above.
double lambda_form(const LogJumpProfile& w1, const LogJumpProfile& w2, double lambda, double tol = 1e-13);

}  // namespace fracpoh::scalingop
