#include "kinequil/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace kinequil::numerics {

void Tolerances::validate() const {
    if (!(ode_rel > 0) || !(ode_abs > 0) || !(quad_tol > 0) || !(root_tol > 0))
        throw NumericsError("Tolerances: all tolerances must be strictly positive");
    if (!(r_eps > 0) || !(r_max > r_eps))
        throw NumericsError("Tolerances: need 0 < r_eps < r_max");
    if (grid_points < 0 || (grid_points > 0 && grid_points < 16))
        throw NumericsError("Tolerances: grid_points must be 0 (auto) or >= 16");
}

int Tolerances::matter_grid_points() const {
    if (grid_points > 0) return grid_points;
    double n = 1200.0 * std::pow(1e-8 / ode_rel, 0.25);
    return static_cast<int>(std::clamp(n, 400.0, 40000.0));
}

Tolerances Tolerances::tightened(double factor) const {
    Tolerances t = *this;
    t.ode_rel /= factor;
    t.ode_abs /= factor;
    t.quad_tol /= factor;
    return t;
}

bool RadialGrid::valid() const {
    if (nodes.empty() || nodes.front() <= 0) return false;
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (!(nodes[i] > nodes[i - 1])) return false;
    return nodes.back() <= r_max;
}

std::vector<double> linspace(double a, double b, std::size_t n_nodes) {
    std::vector<double> x(n_nodes);
    if (n_nodes == 1) {
        x[0] = a;
        return x;
    }
    const double h = (b - a) / static_cast<double>(n_nodes - 1);
    for (std::size_t i = 0; i < n_nodes; ++i) x[i] = a + h * static_cast<double>(i);
    x.back() = b;
    return x;
}

namespace {

// Dormand-Prince 5(4) tableau (FSAL; b == a7*).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// b - bhat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense-output coefficients (Hairer, Norsett & Wanner)
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

// One accepted step together with its continuous extension.
struct DenseStep {
    double r0 = 0, h = 0;
    std::vector<double> c1, c2, c3, c4, c5;  // rcont1..5

    void eval(double r, std::span<double> out) const {
        const double th = (r - r0) / h;
        const double th1 = 1.0 - th;
        for (std::size_t i = 0; i < c1.size(); ++i)
            out[i] = c1[i] + th * (c2[i] + th1 * (c3[i] + th * (c4[i] + th1 * c5[i])));
    }
};

double error_norm(std::span<const double> err, std::span<const double> y0,
                  std::span<const double> y1, double abs_tol, double rel_tol) {
    double sum = 0;
    for (std::size_t i = 0; i < err.size(); ++i) {
        const double sc = abs_tol + rel_tol * std::max(std::fabs(y0[i]), std::fabs(y1[i]));
        const double q = err[i] / sc;
        sum += q * q;
    }
    return std::sqrt(sum / static_cast<double>(err.size()));
}

}  // namespace

OdeSolution integrate_ode(const OdeRhs& rhs, std::span<const double> y0_in, double r0, double r1,
                          const Tolerances& tol, const EventFn& stop,
                          std::span<const double> output_nodes) {
    tol.validate();
    if (!(r1 > r0)) throw NumericsError("integrate_ode: degenerate domain");
    const std::size_t n = y0_in.size();
    if (n == 0) throw NumericsError("integrate_ode: empty state");

    std::vector<double> y(y0_in.begin(), y0_in.end());
    std::vector<double> ynew(n), yerr(n), ystage(n);
    std::array<std::vector<double>, 7> k;
    for (auto& ki : k) ki.assign(n, 0.0);

    OdeSolution sol;
    sol.grid.r_max = r1;
    const bool explicit_nodes = !output_nodes.empty();
    std::size_t next_node = 0;

    auto emit = [&](double r, std::span<const double> state) {
        sol.grid.nodes.push_back(r);
        sol.states.emplace_back(state.begin(), state.end());
    };

    // leading output nodes at (or numerically at) the start point
    while (explicit_nodes && next_node < output_nodes.size() &&
           output_nodes[next_node] <= r0 * (1 + 1e-14)) {
        emit(output_nodes[next_node], y);
        ++next_node;
    }
    if (!explicit_nodes) emit(r0, y);

    rhs(r0, y, k[0]);
    double g_prev = stop ? stop(r0, y) : 0.0;

    // initial step: conservative magnitude-based guess, controller takes over
    double ynorm = 0, fnorm = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ynorm = std::max(ynorm, std::fabs(y[i]));
        fnorm = std::max(fnorm, std::fabs(k[0][i]));
    }
    double h = (fnorm > 0) ? 0.01 * std::max(ynorm, tol.ode_abs) / fnorm : (r1 - r0) / 100;
    h = std::min(h, (r1 - r0) / 10);
    if (tol.max_step > 0) h = std::min(h, tol.max_step);

    double r = r0;
    const double hmin_factor = 16.0 * std::numeric_limits<double>::epsilon();
    long steps = 0;
    const long max_steps = 50'000'000;

    while (r < r1) {
        if (++steps > max_steps) throw NumericsError("integrate_ode: step limit exceeded");
        h = std::min(h, r1 - r);
        if (h < hmin_factor * std::max(std::fabs(r), 1.0))
            throw NumericsError("integrate_ode: step-size underflow (stiff or singular input)");

        auto stage = [&](double ci, std::initializer_list<std::pair<double, int>> terms,
                         std::vector<double>& kout) {
            for (std::size_t i = 0; i < n; ++i) {
                double acc = y[i];
                for (auto [aij, j] : terms) acc += h * aij * k[static_cast<std::size_t>(j)][i];
                ystage[i] = acc;
            }
            rhs(r + ci * h, ystage, kout);
        };
        stage(c2, {{a21, 0}}, k[1]);
        stage(c3, {{a31, 0}, {a32, 1}}, k[2]);
        stage(c4, {{a41, 0}, {a42, 1}, {a43, 2}}, k[3]);
        stage(c5, {{a51, 0}, {a52, 1}, {a53, 2}, {a54, 3}}, k[4]);
        stage(1.0, {{a61, 0}, {a62, 1}, {a63, 2}, {a64, 3}, {a65, 4}}, k[5]);
        for (std::size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k[0][i] + b3 * k[2][i] + b4 * k[3][i] + b5 * k[4][i] +
                                  b6 * k[5][i]);
        rhs(r + h, ynew, k[6]);  // FSAL stage
        for (std::size_t i = 0; i < n; ++i)
            yerr[i] = h * (e1 * k[0][i] + e3 * k[2][i] + e4 * k[3][i] + e5 * k[4][i] +
                           e6 * k[5][i] + e7 * k[6][i]);

        const double err = error_norm(yerr, y, ynew, tol.ode_abs, tol.ode_rel);
        if (err > 1.0) {
            h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
            continue;
        }

        // accepted: build the continuous extension for this step
        DenseStep dense;
        dense.r0 = r;
        dense.h = h;
        dense.c1.resize(n);
        dense.c2.resize(n);
        dense.c3.resize(n);
        dense.c4.resize(n);
        dense.c5.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double dy = ynew[i] - y[i];
            dense.c1[i] = y[i];
            dense.c2[i] = dy;
            dense.c3[i] = h * k[0][i] - dy;
            dense.c4[i] = dy - h * k[6][i] - dense.c3[i];
            dense.c5[i] = h * (d1 * k[0][i] + d3 * k[2][i] + d4 * k[3][i] + d5 * k[4][i] +
                               d6 * k[5][i] + d7 * k[6][i]);
        }
        const double r_new = r + h;

        std::optional<double> event_r;
        if (stop) {
            const double g_new = stop(r_new, ynew);
            if (g_prev != 0.0 && g_prev * g_new <= 0.0) {
                std::vector<double> tmp(n);
                auto g_of = [&](double rr) {
                    dense.eval(rr, tmp);
                    return stop(rr, tmp);
                };
                event_r = find_root_bracketed(g_of, r, r_new, tol.root_tol);
            }
            g_prev = g_new;
        }
        const double r_stop = event_r.value_or(r_new);

        if (explicit_nodes) {
            while (next_node < output_nodes.size() && output_nodes[next_node] <= r_stop) {
                std::vector<double> tmp(n);
                dense.eval(output_nodes[next_node], tmp);
                emit(output_nodes[next_node], tmp);
                ++next_node;
            }
        }

        if (event_r) {
            sol.event_radius = *event_r;
            sol.event_state.resize(n);
            dense.eval(*event_r, sol.event_state);
            return sol;
        }

        y.swap(ynew);
        k[0].swap(k[6]);  // FSAL
        r = r_new;
        if (!explicit_nodes) emit(r, y);

        h *= std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
        if (tol.max_step > 0) h = std::min(h, tol.max_step);
    }
    return sol;
}

namespace {

// QUADPACK (G7, K15) nodes and weights on [-1, 1], positive half.
constexpr std::array<double, 8> xgk = {0.9914553711208126, 0.9491079123427585,
                                       0.8648644233597691, 0.7415311855993944,
                                       0.5860872354676911, 0.4058451513773972,
                                       0.2077849550078985, 0.0};
constexpr std::array<double, 8> wgk = {0.0229353220105292, 0.0630920926299786,
                                       0.1047900103222502, 0.1406532597155259,
                                       0.1690047266392679, 0.1903505780647854,
                                       0.2044329400752989, 0.2094821410847278};
constexpr std::array<double, 4> wg = {0.1294849661688697, 0.2797053914892767,
                                      0.3818300505051189, 0.4179591836734694};

struct PanelEstimate {
    double kronrod = 0;
    double err = 0;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double resk = wgk[7] * f(mid);
    double resg = wg[3] * f(mid);
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[static_cast<std::size_t>(j)];
        const double fsum = f(mid - dx) + f(mid + dx);
        resk += wgk[static_cast<std::size_t>(j)] * fsum;
        if (j % 2 == 1) resg += wg[static_cast<std::size_t>(j / 2)] * fsum;
    }
    resk *= half;
    resg *= half;
    return {resk, std::fabs(resk - resg)};
}

double adaptive_gk(const std::function<double(double)>& f, double a, double b, double tol,
                   int depth) {
    const auto est = gk15(f, a, b);
    if (est.err <= tol || est.err <= 1e-16 * std::fabs(est.kronrod)) return est.kronrod;
    if (depth >= 60)
        throw NumericsError("quad: no convergence after max subdivisions");
    const double mid = 0.5 * (a + b);
    return adaptive_gk(f, a, mid, 0.5 * tol, depth + 1) +
           adaptive_gk(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace

double quad(const std::function<double(double)>& f, double a, double b, double tol,
            Endpoint care) {
    if (a == b) return 0.0;
    if (!(tol > 0)) throw NumericsError("quad: tolerance must be positive");
    if (care == Endpoint::none) return adaptive_gk(f, a, b, tol, 0);

    // x = a + (b-a) s(t) with the degree-7 smoothstep s = t^4 (35 - 84t + 70t^2 - 20t^3),
    // s' = 140 t^3 (1-t)^3. The quartic flattening turns any integrable
    // algebraic endpoint singularity (x-a)^alpha, alpha > -1/2, into a C^1
    // integrand, at either end.
    const double w = b - a;
    auto smoothstep = [](double t) {
        return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
    };
    std::function<double(double)> g = [&f, a, b, w, smoothstep](double t) {
        const double u = 1.0 - t;
        const double ds = 140.0 * t * t * t * u * u * u;
        if (ds == 0.0) return 0.0;  // integrable endpoint: weight vanishes
        // s(1-t) = 1 - s(t); pick the cancellation-free side near each end
        const double x = t <= 0.5 ? a + w * smoothstep(t) : b - w * smoothstep(u);
        return f(x) * w * ds;
    };
    return adaptive_gk(g, 0.0, 1.0, tol, 0);
}

double find_root_bracketed(const std::function<double(double)>& g, double a, double b,
                           double tol) {
    double fa = g(a), fb = g(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    if (fa * fb > 0) throw NumericsError("find_root_bracketed: no sign change on bracket");

    // Brent (1973): inverse quadratic / secant with bisection fallback.
    double c = a, fc = fa, d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();
    for (int iter = 0; iter < 200; ++iter) {
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        const double tol1 = 2 * eps * std::fabs(b) + 0.5 * tol;
        const double xm = 0.5 * (c - b);
        if (std::fabs(xm) <= tol1 || fb == 0) return b;
        if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2 * xm * s;
                q = 1 - s;
            } else {
                const double qq = fa / fc, rr = fb / fc;
                p = s * (2 * xm * qq * (qq - rr) - (b - a) * (rr - 1));
                q = (qq - 1) * (rr - 1) * (s - 1);
            }
            if (p > 0) q = -q;
            p = std::fabs(p);
            if (2 * p < std::min(3 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = g(b);
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    throw NumericsError("find_root_bracketed: iteration limit");
}

double integrate_uniform(std::span<const double> v, double h) {
    const std::size_t n = v.size();
    if (n < 2) return 0.0;
    const std::size_t m = n - 1;  // intervals
    if (m == 1) return 0.5 * h * (v[0] + v[1]);
    std::size_t simpson_end = m;
    double tail = 0.0;
    if (m % 2 == 1) {
        if (m < 3) return 0.5 * h * (v[0] + v[1]);
        simpson_end = m - 3;
        const std::size_t i = simpson_end;
        tail = 3.0 * h / 8.0 * (v[i] + 3 * v[i + 1] + 3 * v[i + 2] + v[i + 3]);
    }
    double s = 0.0;
    if (simpson_end >= 2) {
        s = v[0] + v[simpson_end];
        for (std::size_t i = 1; i < simpson_end; i += 2) s += 4 * v[i];
        for (std::size_t i = 2; i < simpson_end; i += 2) s += 2 * v[i];
        s *= h / 3.0;
    }
    return s + tail;
}

}  // namespace kinequil::numerics
