#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fracpoh {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (pole, s not in (0,1), ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// A series or integral that does not converge for the given arguments.
class DivergenceError : public Error {
public:
    using Error::Error;
};

// Non-finite value returned by a user-supplied integrand or nonlinearity.
class EvaluationError : public Error {
public:
    using Error::Error;
};

// Quadrature ran out of budget. Carries the best estimate obtained so far.
class AccuracyError : public Error {
public:
    AccuracyError(const std::string& what, double best_estimate, double error_estimate)
        : Error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

// Extrapolated sequence that is not Cauchy.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

// Singular or non-factorizable system.
class LinearAlgebraError : public Error {
public:
    using Error::Error;
};

// Newton iteration exceeded its budget. Carries the last iterate (interior nodes).
class NonconvergenceError : public Error {
public:
    NonconvergenceError(const std::string& what, std::vector<double> last_iterate, double last_residual)
        : Error(what), last_iterate_(std::move(last_iterate)), last_residual_(last_residual) {}

    const std::vector<double>& last_iterate() const noexcept { return last_iterate_; }
    double last_residual() const noexcept { return last_residual_; }

private:
    std::vector<double> last_iterate_;
    double last_residual_;
};

// Trace or log-jump fit could not be identified from the samples.
class ExtractionError : public Error {
public:
    using Error::Error;
};

// Missing input that an operation requires (e.g. traces on a solution).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// User-supplied data inconsistent with itself (F_x vs F, F vs f).
class ValidationError : public Error {
public:
    using Error::Error;
};

// Malformed run configuration (CLI flags or config file).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace fracpoh
