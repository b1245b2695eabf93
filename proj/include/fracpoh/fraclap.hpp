#pragma once

// Pointwise and discrete fractional Laplacian on the line.
//
//   (-Delta)^s u(x) = c_{1,s} PV int (u(x) - u(y)) / |x - y|^{1+2s} dy
//
// Pointwise values come from adaptive quadrature of the paired form
//   int_0^inf (2u(x) - u(x+r) - u(x-r)) r^{-1-2s} dr.
// The discrete operator is the P1 Galerkin stiffness matrix on a
// boundary-graded grid with zero exterior extension.

#include <cmath>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace fracpoh::fraclap {

/// Nodal values of a function on [a, b], extended by zero outside.
struct GridFunction1D {
    double a = -1.0;
    double b = 1.0;
    std::vector<double> nodes;   // strictly increasing, nodes.front() == a, nodes.back() == b
    std::vector<double> values;  // values.front() == values.back() == 0
    double grading_exponent = 2.0;

    std::size_t size() const { return nodes.size(); }
    std::size_t cells() const { return nodes.size() - 1; }
    /// Distance to the nearest endpoint.
    double delta(std::size_t j) const;
    /// Piecewise-linear interpolant, zero outside [a, b].
    double interpolate(double x) const;
    /// Values at the interior nodes 1..size()-2.
    Eigen::VectorXd interior() const;
    void set_interior(const Eigen::VectorXd& v);
    /// Throws DomainError unless the invariants hold.
    void validate() const;
};

/// Grid with `cells` cells clustered toward both endpoints:
/// delta(x_j) = (b-a)/2 (2j/cells)^grading for j <= cells/2, mirrored.
GridFunction1D make_graded_grid(double a, double b, std::size_t cells, double grading_exponent = 2.0);

/// A function on the line given by an evaluator. Zero outside (a, b); the
/// support may be unbounded on either side. Near finite support ends it
/// behaves like dist^boundary_exponent; breakpoints mark interior points
/// where it is not smooth.
struct PointFunction {
    std::function<double(double)> evaluator;
    double a = -1.0;
    double b = 1.0;
    double boundary_exponent = 1.0;
    std::vector<double> breakpoints;
    /// Decay |u(t)| <= C |t|^-tail_decay on unbounded sides (0: bounded only).
    double tail_decay = 0.0;
    /// Optional u'(x) inside the support.
    std::function<double(double)> derivative;

    double operator()(double x) const { return (x > a && x < b) ? evaluator(x) : 0.0; }
    bool compact() const { return std::isfinite(a) && std::isfinite(b); }
    /// u'(x) from `derivative` when present, else a central difference
    /// scaled to the distance from the support ends.
    double slope(double x) const;
};

/// delta_0^e: distance to the nearer end of (a, b) raised to `exponent`, zero outside.
PointFunction distance_power(double a, double b, double exponent);
/// exp(-1/(1 - z^2)) with z = (x - center)/radius, a C-infinity bump.
PointFunction smooth_bump(double center, double radius, double height = 1.0);
/// Nodal sampling of f on the nodes of a template grid (endpoints forced to 0).
GridFunction1D sample(const PointFunction& f, const GridFunction1D& grid_template);

struct PointOptions {
    double abs_tol = 1e-11;
    double rel_tol = 1e-11;
    std::size_t max_evaluations = 1'000'000;
};

/// (-Delta)^order u at x, order in (0, 1). Throws DomainError at a support
/// end or breakpoint where the principal value does not exist.
double frac_lap_point(const PointFunction& u, double order, double x, const PointOptions& opts = {});

/// Bilinear remainder of the product rule,
///   I(w1, w2)(x) = c_{1,s} PV int (w1(x)-w1(y))(w2(x)-w2(y)) / |x-y|^{1+2s} dy,
/// so that L(w1 w2) = w1 L w2 + w2 L w1 - I(w1, w2).
double i_s_bilinear(const PointFunction& w1, const PointFunction& w2, double order, double x,
                    const PointOptions& opts = {});

/// Exact (-Delta)^s of the piecewise-linear interpolant of (nodes, values),
/// zero outside. For s >= 1/2 the value is infinite at nodes with a kink.
double frac_lap_piecewise_linear(const std::vector<double>& nodes, const std::vector<double>& values,
                                 double order, double x);

/// Truncated s-harmonic profile phi(x) = x^s on (0, rho0), rho0^s beyond, 0 for x < 0.
PointFunction truncated_power(double rho0, double s);

/// J(x) = int_{-inf}^{rho0} (x_+^s - y_+^s) / |x - y|^{1+s} dy for 0 < |x| <= rho0/2.
double trunc_phi_singular_part(double rho0, double s, double x);

/// (-Delta)^{s/2} phi(x) for x in (-rho0/2, rho0/2), x != 0: c_{1,s/2} (J(x) + tail).
double half_lap_trunc_phi(double rho0, double s, double x);

/// Discrete (-Delta)^s: symmetric P1 stiffness K over interior nodes and the
/// lumped mass m, so that K u ~ m .* (-Delta)^s u.
struct FracLapMatrix {
    double order = 0.5;
    double a = -1.0;
    double b = 1.0;
    std::vector<double> nodes;
    Eigen::MatrixXd stiffness;
    Eigen::VectorXd lumped_mass;

    Eigen::Index interior_size() const { return stiffness.rows(); }
    /// Pointwise approximation m^-1 K u at the interior nodes.
    Eigen::VectorXd apply(const Eigen::VectorXd& interior_values) const;
};

/// Assembles the stiffness of the bilinear form
///   (c_{1,s}/2) int int (u(x)-u(y))(v(x)-v(y)) / |x-y|^{1+2s}
/// for the hat functions of the grid. Throws DomainError for fewer than 8
/// interior nodes or order outside (0, 1).
FracLapMatrix assemble_matrix(const GridFunction1D& grid_template, double order);

/// Dense dumps, row-major, header with N (interior size), s, a, b.
void write_matrix_csv(const FracLapMatrix& m, std::ostream& out);
void write_matrix_binary(const FracLapMatrix& m, std::ostream& out);
FracLapMatrix read_matrix_binary(std::istream& in);

}  // namespace fracpoh::fraclap
