#include "kinequil/ansatz.hpp"

#include <algorithm>
#include <cmath>

#include "kinequil/numerics.hpp"

namespace kinequil::ansatz {

namespace {

constexpr double pi = 3.14159265358979323846;

// x_+^p with the cutoff convention x <= 0 -> 0 (also for p = 0).
double pospow(double x, double p) {
    if (x <= 0.0) return 0.0;
    return p == 0.0 ? 1.0 : std::pow(x, p);
}

double beta_fn(double x, double y) {
    return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

// relative accuracy of the reduced moment integrals; kept well below the ODE
// tolerances so the builders see a smooth right-hand side
constexpr double kernel_rel_tol = 1e-13;

}  // namespace

void AnsatzProfile::validate() const {
    if (!(c >= 0)) throw AnsatzError("AnsatzProfile: amplitude c must be >= 0");
    if (!(k > -0.5)) throw AnsatzError("AnsatzProfile: invalid exponent, need k > -1/2");
    if (!(l >= 0)) throw AnsatzError("AnsatzProfile: angular exponent l must be >= 0");
    if (!(F0 >= 0)) throw AnsatzError("AnsatzProfile: angular cutoff F0 must be >= 0");
}

void AnsatzProfile::require_isotropic(const char* who) const {
    if (!isotropic())
        throw AnsatzError(std::string(who) + ": anisotropic ansatz (l or F0 nonzero) not supported");
}

double eval_profile(const AnsatzProfile& a, double E, double F) {
    return a.c * pospow(a.E0 - E, a.k) * pospow(F - a.F0, a.l);
}

double vp_density(const AnsatzProfile& a, double U) {
    a.validate();
    a.require_isotropic("vp_density");
    // \int (E0 - U - |p|^2/2)_+^k dp over R^3, momentum ball radius sqrt(2(E0-U))
    const double ck = std::pow(2.0, 1.5) * std::pow(pi, 1.5) *
                      std::exp(std::lgamma(a.k + 1.0) - std::lgamma(a.k + 2.5));
    return a.c * ck * pospow(a.E0 - U, a.k + 1.5);
}

double vp_kinetic_density(const AnsatzProfile& a, double U) {
    const double w = a.E0 - U;
    if (w <= 0) return 0.0;
    return 3.0 * w * vp_density(a, U) / (2.0 * a.k + 5.0);
}

double energy_kernel(double a, double E0, double k, double m, double beta) {
    if (a >= E0) return 0.0;
    const double d = E0 - a;
    // E = a + d s(t) with the degree-7 smoothstep s; the quartic flattening of
    // s at both ends makes the integrand C^1 for every k > -1/2, beta > -1/2
    const double amp = std::pow(d, k + beta + 1.0);
    auto smoothstep = [](double t) {
        return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t)));
    };
    auto f = [&](double t) {
        const double u = 1.0 - t;
        const double ds = 140.0 * t * t * t * u * u * u;
        if (ds == 0.0) return 0.0;
        // s(1-t) = 1 - s(t): evaluate both factors on their stable side
        const double s_lo = t <= 0.5 ? smoothstep(t) : 1.0 - smoothstep(u);
        const double s_hi = t <= 0.5 ? 1.0 - s_lo : smoothstep(u);
        if (s_lo <= 0.0 || s_hi <= 0.0) return 0.0;
        const double E = t <= 0.5 ? a + d * s_lo : E0 - d * s_hi;
        return amp * std::pow(s_hi, k) * std::pow(s_lo, beta) * std::pow(E + a, beta) *
               std::pow(E, m) * ds;
    };
    const double bound =
        amp * std::pow(E0 + a, beta) * std::pow(std::max(E0, 1.0), m) * 2.2;  // sup |s'| = 140/64
    return numerics::quad(f, 0.0, 1.0, kernel_rel_tol * bound + 1e-300);
}

MomentSet nv_moments(const AnsatzProfile& a, double phi) {
    a.validate();
    a.require_isotropic("nv_moments");
    MomentSet mom;
    const double ea = std::exp(phi);
    if (ea >= a.E0 || a.c == 0.0) return mom;
    // dp = 4 pi E sqrt(E^2 - e^{2phi}) dE on E in [e^phi, E0]
    const double pref = 4.0 * pi * a.c;
    mom.rho = pref * energy_kernel(ea, a.E0, a.k, 1.0, 0.5);
    mom.h = pref * energy_kernel(ea, a.E0, a.k, 2.0, 0.5);
    mom.n_aux = pref * energy_kernel(ea, a.E0, a.k, 0.0, 0.5);
    return mom;
}

MomentSet ev_moments(const AnsatzProfile& a, double mu, double r) {
    a.validate();
    if (!(r > 0)) throw AnsatzError("ev_moments: r must be positive");
    MomentSet mom;
    const double f0r2 = a.F0 / (r * r);
    const double eb = std::exp(mu) * std::sqrt(1.0 + f0r2);  // lowest reachable energy
    if (eb >= a.E0 || a.c == 0.0) return mom;

    // The F-integral of (F-F0)^l against powers of sqrt(u^2-1-F/r^2) is a Beta
    // function, which leaves one energy integral per moment:
    //   moment = 2 pi c r^{2l} B(..) e^{-mu(m+2beta+1)} K(E_b, E0; k, m, beta)
    const double b_low = beta_fn(a.l + 1.0, 0.5);   // weights 1/sqrt
    const double b_prs = beta_fn(a.l + 1.0, 1.5);   // radial-pressure weight
    const double b_tan = beta_fn(a.l + 2.0, 0.5);   // tangential extra F factor
    const double base = 2.0 * pi * a.c * pospow(r * r, a.l);
    const double bl = a.l + 0.5, bh = a.l + 1.5;
    const auto em = [&](double p) { return std::exp(-mu * p); };

    mom.n_aux = base * b_low * em(2 * a.l + 2) * energy_kernel(eb, a.E0, a.k, 0.0, bl);
    mom.rho = base * b_low * em(2 * a.l + 3) * energy_kernel(eb, a.E0, a.k, 1.0, bl);
    mom.h = base * b_low * em(2 * a.l + 4) * energy_kernel(eb, a.E0, a.k, 2.0, bl);
    mom.p_rad = base * b_prs * em(2 * a.l + 4) * energy_kernel(eb, a.E0, a.k, 0.0, bh);
    mom.p_tan = base * (b_tan * em(2 * a.l + 4) * energy_kernel(eb, a.E0, a.k, 0.0, bh) +
                        f0r2 * b_low * em(2 * a.l + 2) * energy_kernel(eb, a.E0, a.k, 0.0, bl));
    return mom;
}

namespace {

struct BruteSetup {
    double v_lo = 0, v_hi = 0;                     // radial momentum/velocity range
    std::function<double(double, double)> value;   // integrand(v, theta) without volume factor
};

// weight x psi as a function of (v, theta) for the EV measure; VP/NV never
// depend on theta through psi, the angular loops below are kept anyway
BruteSetup brute_setup(const AnsatzProfile& a, double field, double r, Moment which,
                       Model model) {
    BruteSetup s;
    switch (model) {
        case Model::vp: {
            a.require_isotropic("brute_force_moment[vp]");
            const double w = a.E0 - field;
            s.v_hi = w > 0 ? std::sqrt(2.0 * w) : 0.0;
            s.value = [a, field, which](double v, double) {
                const double E = field + 0.5 * v * v;
                const double psi = eval_profile(a, E, 1.0);  // F-factor trivial (l = F0 = 0)
                switch (which) {
                    case Moment::density: return psi;
                    case Moment::kinetic_energy: return 0.5 * v * v * psi;
                    default: throw AnsatzError("brute_force_moment: moment not defined for vp");
                }
            };
            return s;
        }
        case Model::nv: {
            a.require_isotropic("brute_force_moment[nv]");
            const double e2 = std::exp(2.0 * field);
            const double pm2 = a.E0 * a.E0 - e2;
            s.v_hi = pm2 > 0 ? std::sqrt(pm2) : 0.0;
            s.value = [a, e2, which](double p, double) {
                const double E = std::sqrt(e2 + p * p);
                const double psi = eval_profile(a, E, 1.0);
                switch (which) {
                    case Moment::density: return psi;
                    case Moment::energy: return E * psi;
                    case Moment::inv_energy: return psi / E;
                    default: throw AnsatzError("brute_force_moment: moment not defined for nv");
                }
            };
            return s;
        }
        case Model::ev: {
            if (!(r > 0)) throw AnsatzError("brute_force_moment: r must be positive for ev");
            const double emu = std::exp(field);
            const double um = a.E0 / emu;  // max sqrt(1+v^2)
            s.v_hi = um > 1 ? std::sqrt(um * um - 1.0) : 0.0;
            s.v_lo = a.F0 > 0 ? std::sqrt(a.F0) / r : 0.0;
            s.value = [a, emu, r, which](double v, double th) {
                const double st = std::sin(th), ct = std::cos(th);
                const double u = std::sqrt(1.0 + v * v);
                const double E = emu * u;
                const double F = r * r * v * v * st * st;
                const double psi = eval_profile(a, E, F);
                switch (which) {
                    case Moment::density: return psi;
                    case Moment::energy: return u * psi;
                    case Moment::inv_energy: return psi / u;
                    case Moment::radial_pressure: return v * v * ct * ct * psi / u;
                    case Moment::tangential_pressure: return v * v * st * st * psi / u;
                    default: throw AnsatzError("brute_force_moment: moment not defined for ev");
                }
            };
            return s;
        }
    }
    throw AnsatzError("brute_force_moment: unknown model");
}

}  // namespace

double brute_force_moment(const AnsatzProfile& a, double field, double r, Moment which,
                          Model model) {
    a.validate();
    if (a.c == 0.0) return 0.0;
    const BruteSetup s = brute_setup(a, field, r, which, model);
    if (!(s.v_hi > s.v_lo)) return 0.0;

    // 8-point azimuthal ring (the integrand is axisymmetric about x-hat; the
    // ring keeps the rule honestly 3-D and is exact for constants)
    constexpr int n_az = 8;
    const double daz = 2.0 * pi / n_az;

    auto polar_integral = [&](double v, double tol_inner) {
        // restrict to the F-support: sin(theta) >= sqrt(F0)/(r v)
        double th_lo = 0.0;
        if (model == Model::ev && a.F0 > 0) {
            const double smin = std::sqrt(a.F0) / (r * v);
            if (smin >= 1.0) return 0.0;
            th_lo = std::asin(smin);
        }
        auto g = [&](double th) {
            double ring = 0.0;
            for (int j = 0; j < n_az; ++j) ring += s.value(v, th) * daz;
            return ring * std::sin(th);
        };
        return numerics::quad(g, th_lo, pi - th_lo, tol_inner, numerics::Endpoint::both);
    };
    auto nested = [&](double tol_inner, double tol_outer) {
        auto f = [&](double v) { return v * v * polar_integral(v, tol_inner); };
        return numerics::quad(f, s.v_lo, s.v_hi, tol_outer, numerics::Endpoint::both);
    };

    // two passes: a loose one seeded by a crude magnitude bound to learn the
    // actual scale, then the real one with tolerances anchored to it
    const double e_lo = model == Model::vp ? field
                        : model == Model::nv
                            ? std::exp(field)
                            : std::exp(field) * std::sqrt(1.0 + a.F0 / (r * r));
    const double f_max = model == Model::ev ? r * r * s.v_hi * s.v_hi : 0.0;
    const double vol = 4.0 / 3.0 * pi * s.v_hi * s.v_hi * s.v_hi;
    const double scale = a.c * pospow(a.E0 - e_lo, a.k) * (1.0 + pospow(f_max - a.F0, a.l)) *
                             (1.0 + s.v_hi * s.v_hi) * vol +
                         1e-280;
    const double rough = nested(1e-7 * scale, 1e-5 * scale);
    if (rough == 0.0) return 0.0;
    // floors keep near-empty support slivers from demanding sub-roundoff
    // absolute accuracy; they sit far below the 1e-10 comparison floor
    const double v3 = std::max(s.v_hi * s.v_hi * s.v_hi, 1e-30);
    const double tol_inner = std::max(1e-9 * std::fabs(rough) / v3, 1e-14 * scale);
    const double tol_outer = std::max(1e-8 * std::fabs(rough), 1e-13 * scale);
    return nested(tol_inner, tol_outer);
}

}  // namespace kinequil::ansatz
