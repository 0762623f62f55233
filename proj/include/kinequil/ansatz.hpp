#pragma once

#include <stdexcept>
#include <string>

// Polytropic distribution-function profiles psi(E,F) = c (E0-E)_+^k (F-F0)_+^l
// and the reduction of their 3-D momentum-space moments to 1-D energy
// integrals, one set per model (Vlasov-Poisson, Nordstrom-Vlasov,
// Einstein-Vlasov). brute_force_moment() evaluates the same moments by direct
// tensorized spherical quadrature with no reduction formulas and serves as the
// independent oracle.
namespace kinequil::ansatz {

class AnsatzError : public std::runtime_error {
public:
    explicit AnsatzError(const std::string& what) : std::runtime_error(what) {}
};

struct AnsatzProfile {
    double c = 1.0;   ///< amplitude, >= 0
    double k = 1.0;   ///< energy exponent, > -1/2
    double E0 = 0.9;  ///< particle-energy cutoff; (0,1) for NV/EV, < 0 for VP
    double l = 0.0;   ///< angular-momentum exponent, >= 0
    double F0 = 0.0;  ///< angular-momentum cutoff; > 0 makes EV shells

    bool isotropic() const { return l == 0.0 && F0 == 0.0; }
    /// Throws AnsatzError on parameters outside the admissible family.
    void validate() const;
    void require_isotropic(const char* who) const;
};

/// Matter moments at one radius. For NV only h (kinetic energy density),
/// rho and n_aux (the field-equation source) are populated. p_tan sums both
/// tangential directions, so p_tan = 2 p_rad in the isotropic case.
struct MomentSet {
    double h = 0.0;      ///< energy density (matter part)
    double p_rad = 0.0;  ///< radial pressure
    double p_tan = 0.0;  ///< tangential pressure (both directions)
    double n_aux = 0.0;  ///< \int f / sqrt(1+|v|^2) dv  (or NV source moment)
    double rho = 0.0;    ///< \int f dv (number/rest-mass density)
};

enum class Model { vp, nv, ev };

enum class Moment {
    density,              ///< rho
    energy,               ///< h
    radial_pressure,      ///< p_rad (EV only)
    tangential_pressure,  ///< p_tan (EV only)
    inv_energy,           ///< n_aux / NV source moment
    kinetic_energy,       ///< VP kinetic energy density
};

/// psi(E,F); zero whenever E >= E0 or F <= F0.
double eval_profile(const AnsatzProfile& a, double E, double F);

/// VP: rho(U) = \int psi(|p|^2/2 + U) dp, closed form
/// c_k (E0-U)_+^{k+3/2} with c_k = 2^{3/2} pi^{3/2} Gamma(k+1)/Gamma(k+5/2).
double vp_density(const AnsatzProfile& a, double U);

/// VP kinetic-energy density \int (|p|^2/2) psi dp = 3 (E0-U) rho / (2k+5).
double vp_kinetic_density(const AnsatzProfile& a, double U);

/// NV static moments at field value phi: particle energy E = sqrt(e^{2phi}+|p|^2).
/// h <- \int E f dp, rho <- \int f dp, n_aux <- \int f/E dp.
MomentSet nv_moments(const AnsatzProfile& a, double phi);

/// EV moments at metric value mu and radius r > 0, with E = e^mu sqrt(1+|v|^2)
/// and F = |x ^ v|^2. Supports shells (F0 > 0, l >= 0).
MomentSet ev_moments(const AnsatzProfile& a, double mu, double r);

/// Reduced 1-D energy integral all moment formulas share:
///   K(a, E0; k, m, beta) = \int_a^{E0} (E0-E)^k E^m (E^2-a^2)^beta dE
/// (zero for a >= E0). Endpoint singularities are removed by the substitution
/// E = a + (E0-a) sin^2(theta) before adaptive quadrature.
double energy_kernel(double a, double E0, double k, double m, double beta);

/// Direct 3-D momentum-space quadrature of the selected moment (tensorized
/// radial x polar x azimuthal spherical rule, no reduction formulas).
/// `field` is U for VP, phi for NV, mu for EV; r is used by EV only.
double brute_force_moment(const AnsatzProfile& a, double field, double r, Moment which,
                          Model model);

}  // namespace kinequil::ansatz
