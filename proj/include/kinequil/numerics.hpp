#pragma once

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Generic numerical kernels: adaptive embedded Runge-Kutta integration with
// event detection and dense output, adaptive Gauss-Kronrod quadrature,
// bracketed root finding, and radial grids. Everything here is pure and
// reentrant; nothing holds shared state.
namespace kinequil::numerics {

/// Thrown when an iteration fails to converge (step-size underflow,
/// quadrature subdivision limit, missing sign change, ...).
class NumericsError : public std::runtime_error {
public:
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

/// Solver knobs shared by all builders. The extra members beyond the four
/// tolerances are plumbing: grid_points = 0 derives the stored-grid density
/// from ode_rel, r_eps is the regularized start of all radial integrations,
/// max_step = 0 leaves the step size unconstrained.
struct Tolerances {
    double ode_rel = 1e-8;
    double ode_abs = 1e-10;
    double quad_tol = 1e-10;
    double root_tol = 1e-10;
    int grid_points = 0;
    double r_eps = 1e-6;
    double r_max = 1e4;
    double max_step = 0.0;

    void validate() const;
    /// Number of stored nodes in the matter region; scales like ode_rel^(-1/4)
    /// so that composite-quadrature error on the stored grid stays below the
    /// ODE error as tolerances tighten.
    int matter_grid_points() const;
    /// Copy with ode/quad tolerances tightened by the given factor.
    Tolerances tightened(double factor = 10.0) const;
};

/// Strictly increasing radii, first node at r_eps > 0.
struct RadialGrid {
    std::vector<double> nodes;
    double r_max = 0.0;

    std::size_t size() const { return nodes.size(); }
    double operator[](std::size_t i) const { return nodes[i]; }
    bool valid() const;
};

/// Uniform grid with n_nodes nodes on [a, b] inclusive.
std::vector<double> linspace(double a, double b, std::size_t n_nodes);

/// dy = f(r, y)
using OdeRhs = std::function<void(double r, std::span<const double> y, std::span<double> dy)>;
/// Scalar event function; integration stops when its sign changes.
using EventFn = std::function<double(double r, std::span<const double> y)>;

struct OdeSolution {
    RadialGrid grid;
    std::vector<std::vector<double>> states;  // states[i] belongs to grid.nodes[i]
    std::optional<double> event_radius;
    std::vector<double> event_state;

    std::size_t dim() const { return states.empty() ? 0 : states.front().size(); }
};

/// Adaptive Dormand-Prince 5(4) with 4th-order dense output.
///
/// Integrates y' = rhs(r, y) from r0 to r1 (r1 > r0). If `stop` is given, the
/// first sign change of stop(r, y) along the solution halts integration and
/// the crossing is localized to tol.root_tol via the dense output; the state
/// at the crossing is returned in event_state. If `output_nodes` is nonempty
/// (sorted, within [r0, r1]) the solution is sampled there, truncated at the
/// event; otherwise the accepted step points are returned.
OdeSolution integrate_ode(const OdeRhs& rhs, std::span<const double> y0, double r0, double r1,
                          const Tolerances& tol, const EventFn& stop = {},
                          std::span<const double> output_nodes = {});

/// Endpoint treatment for quad(): a sin^2 substitution that regularizes
/// integrable algebraic endpoint singularities (x-a)^alpha, alpha > -1.
enum class Endpoint { none, left, right, both };

/// Adaptive Gauss-Kronrod (G7,K15) estimate of the integral of f over [a, b].
/// Throws NumericsError after the subdivision limit.
double quad(const std::function<double(double)>& f, double a, double b, double tol,
            Endpoint care = Endpoint::none);

/// Brent's method on a sign-changing bracket; requires g(a)*g(b) <= 0.
/// Returns x with bracket width <= tol.
double find_root_bracketed(const std::function<double(double)>& g, double a, double b, double tol);

/// Composite Simpson for values sampled on a uniform grid with spacing h
/// (odd interval counts finished with the 3/8 rule).
double integrate_uniform(std::span<const double> values, double h);

}  // namespace kinequil::numerics
