#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "kinequil/numerics.hpp"

using namespace kinequil::numerics;

namespace {

constexpr double pi = 3.14159265358979323846;

// Lane-Emden index n = 1 in flux form: state (theta, v = xi^2 theta').
// Closed-form solution theta = sin(xi)/xi, first zero at xi = pi.
void lane_emden_rhs(double xi, std::span<const double> y, std::span<double> dy) {
    dy[0] = y[1] / (xi * xi);
    dy[1] = -xi * xi * y[0];
}

std::vector<double> lane_emden_start(double xi0) {
    // theta = 1 - xi^2/6 + xi^4/120, v = xi^2 theta'
    const double th = 1.0 - xi0 * xi0 / 6.0 + std::pow(xi0, 4) / 120.0;
    const double dth = -xi0 / 3.0 + std::pow(xi0, 3) / 30.0;
    return {th, xi0 * xi0 * dth};
}

double lane_emden_zero(const Tolerances& tol) {
    const double xi0 = 1e-6;
    auto y0 = lane_emden_start(xi0);
    auto sol = integrate_ode(lane_emden_rhs, y0, xi0, 10.0, tol,
                             [](double, std::span<const double> y) { return y[0]; });
    REQUIRE(sol.event_radius.has_value());
    return *sol.event_radius;
}

}  // namespace

TEST_CASE("integrate_ode: exponential growth") {
    Tolerances tol;
    auto sol = integrate_ode([](double, std::span<const double> y,
                                std::span<double> dy) { dy[0] = y[0]; },
                             std::vector<double>{1.0}, 0.0, 1.0, tol);
    CHECK(sol.states.back()[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-8));
}

TEST_CASE("integrate_ode: constant solution stays constant") {
    Tolerances tol;
    const double c = 3.25;
    std::vector<double> nodes = {0.0, 0.3, 0.7, 1.0};
    auto sol = integrate_ode([](double, std::span<const double>, std::span<double> dy) {
                                 dy[0] = 0.0;
                             },
                             std::vector<double>{c}, 0.0, 1.0, tol, {}, nodes);
    REQUIRE(sol.states.size() == nodes.size());
    for (const auto& s : sol.states) CHECK(s[0] == c);
}

TEST_CASE("integrate_ode: Lane-Emden n=1 against sin(xi)/xi") {
    Tolerances tol;
    const double xi0 = 1e-6;
    auto y0 = lane_emden_start(xi0);
    std::vector<double> nodes;
    for (int i = 0; i <= 200; ++i) nodes.push_back(xi0 + (3.0 - xi0) * i / 200.0);
    auto sol = integrate_ode(lane_emden_rhs, y0, xi0, 3.2, tol, {}, nodes);
    REQUIRE(sol.states.size() == nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double xi = nodes[i];
        CHECK(std::fabs(sol.states[i][0] - std::sin(xi) / xi) < 1e-8);
    }
    CHECK(std::fabs(lane_emden_zero(tol) - pi) < 1e-6);
}

TEST_CASE("integrate_ode: tolerance and step-size convergence on the Lane-Emden zero") {
    // tightening the tolerances 10x must improve the zero location by >= 4x
    Tolerances loose;
    loose.ode_rel = 1e-6;
    loose.ode_abs = 1e-8;
    const double err_loose = std::fabs(lane_emden_zero(loose) - pi);
    const double err_tight = std::fabs(lane_emden_zero(loose.tightened(10.0)) - pi);
    CHECK(err_tight * 4.0 <= err_loose);

    // observed order >= 2: force fixed steps via max_step, halve, expect >= 4x
    Tolerances fixed;
    fixed.ode_rel = 1e-2;  // accept every step; max_step controls accuracy
    fixed.ode_abs = 1e-2;
    fixed.root_tol = 1e-14;
    fixed.max_step = 0.05;
    const double err_h = std::fabs(lane_emden_zero(fixed) - pi);
    fixed.max_step = 0.025;
    const double err_h2 = std::fabs(lane_emden_zero(fixed) - pi);
    CHECK(err_h2 * 4.0 <= err_h);
}

TEST_CASE("integrate_ode: event localized to root_tol") {
    Tolerances tol;
    tol.root_tol = 1e-12;
    // y' = 1, event at y = 2 -> r = 2 exactly
    auto sol = integrate_ode([](double, std::span<const double>, std::span<double> dy) {
                                 dy[0] = 1.0;
                             },
                             std::vector<double>{0.0}, 0.0, 5.0, tol,
                             [](double, std::span<const double> y) { return y[0] - 2.0; });
    REQUIRE(sol.event_radius.has_value());
    CHECK(std::fabs(*sol.event_radius - 2.0) < 1e-10);
    CHECK(std::fabs(sol.event_state[0] - 2.0) < 1e-10);
}

TEST_CASE("integrate_ode: step-size underflow on singular input") {
    Tolerances tol;
    CHECK_THROWS_AS(integrate_ode([](double r, std::span<const double>, std::span<double> dy) {
                                      dy[0] = 1.0 / (1.0 - r);
                                  },
                                  std::vector<double>{0.0}, 0.0, 2.0, tol),
                    NumericsError);
}

TEST_CASE("quad: polynomials and classics") {
    CHECK(quad([](double x) { return x * x; }, 0, 1, 1e-12) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(quad([](double x) { return std::sin(x); }, 0, pi, 1e-12) ==
          doctest::Approx(2.0).epsilon(1e-13));
    // Kronrod-15 integrates polynomials up to degree 22 exactly on one panel
    for (int deg : {5, 10, 13, 20}) {
        const double exact = 1.0 / (deg + 1);
        CHECK(std::fabs(quad([deg](double x) { return std::pow(x, deg); }, 0, 1, 1e-6) - exact) <
              1e-15);
    }
}

TEST_CASE("quad: sqrt-type endpoint singularity against an independent reference") {
    // \int_1^2 e^2 sqrt(e^2-1) de; reference by composite Simpson after the
    // substitution e = cosh(t), which makes the integrand smooth
    const double t1 = std::acosh(2.0);
    const int n = 4000;
    std::vector<double> vals(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = t1 * i / n;
        const double ch = std::cosh(t), sh = std::sinh(t);
        vals[static_cast<std::size_t>(i)] = ch * ch * sh * sh;
    }
    const double reference = integrate_uniform(vals, t1 / n);
    const double value = quad([](double e) { return e * e * std::sqrt(e * e - 1.0); }, 1.0, 2.0,
                              1e-13, Endpoint::left);
    CHECK(std::fabs(value - reference) < 1e-10);
    CHECK(value == doctest::Approx(2.866469176129933).epsilon(1e-12));
}

TEST_CASE("quad: non-convergence reported") {
    CHECK_THROWS_AS(quad([](double x) { return 1.0 / x; }, 0.0, 1.0, 1e-12), NumericsError);
}

TEST_CASE("find_root_bracketed") {
    CHECK(find_root_bracketed([](double x) { return x - 1.0; }, 0, 2, 1e-12) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK(find_root_bracketed([](double x) { return std::cos(x); }, 1, 2, 1e-13) ==
          doctest::Approx(pi / 2).epsilon(1e-12));
    CHECK_THROWS_AS(find_root_bracketed([](double x) { return x * x + 1.0; }, 0, 1, 1e-12),
                    NumericsError);
}

TEST_CASE("integrate_uniform: Simpson exactness and odd interval counts") {
    for (int n_nodes : {5, 6, 9, 10}) {
        std::vector<double> v(static_cast<std::size_t>(n_nodes));
        const double h = 1.0 / (n_nodes - 1);
        for (int i = 0; i < n_nodes; ++i) {
            const double x = i * h;
            v[static_cast<std::size_t>(i)] = x * x * x;  // cubic: Simpson and 3/8 both exact
        }
        CHECK(integrate_uniform(v, h) == doctest::Approx(0.25).epsilon(1e-13));
    }
}

TEST_CASE("Tolerances validation and grid scaling") {
    Tolerances t;
    CHECK_NOTHROW(t.validate());
    CHECK(t.ode_rel <= 1e-6);
    CHECK(t.tightened(10).matter_grid_points() > t.matter_grid_points());
    Tolerances bad;
    bad.ode_rel = -1;
    CHECK_THROWS_AS(bad.validate(), NumericsError);
}

TEST_CASE("RadialGrid invariants") {
    RadialGrid g;
    g.nodes = {1e-6, 0.5, 1.0};
    g.r_max = 2.0;
    CHECK(g.valid());
    g.nodes = {0.5, 0.5};
    CHECK(!g.valid());
}
