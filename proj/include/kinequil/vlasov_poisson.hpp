#pragma once

#include <array>
#include <span>
#include <vector>

#include "kinequil/ansatz.hpp"
#include "kinequil/errors.hpp"
#include "kinequil/numerics.hpp"
#include "kinequil/report.hpp"

// Static polytropic steady states of the Vlasov-Poisson system in 4 pi G = 1
// units: Delta U = rho, rho = \int f dp, f = psi(|p|^2/2 + U). Invariants,
// Galilean boosts of the invariants, and the virial checks H = -E_kin, H < 0,
// H' < |Q'|^2 / 2M.
namespace kinequil::vp {

struct VPSolution {
    numerics::RadialGrid grid;
    std::vector<double> U;    ///< potential, U < 0 on the support, -> 0 at infinity
    std::vector<double> dU;   ///< U'
    std::vector<double> rho;  ///< vp_density(profile, U) pointwise
    double R_support = 0.0;
    std::size_t i_support = 0;  ///< grid index of the node at R_support
    double tail_A = 0.0;        ///< U = -tail_A / r for r >= R_support
    ansatz::AnsatzProfile profile;  ///< E0 holds the realized cutoff (< 0)

    bool vacuum() const { return R_support <= 0.0; }
};

struct GalileanInvariants {
    double M = 0.0;
    double H = 0.0;
    double E_kin = 0.0;
    double E_pot = 0.0;  ///< field energy 1/2 \int |grad U|^2, boost-invariant
    std::array<double, 3> Q{0.0, 0.0, 0.0};
};

/// Integrates the reduced radial Poisson equation outward from the given
/// central depth E0 - U(0) until the density vanishes, then matches the
/// exterior Coulomb tail (which fixes the realized cutoff E0 < 0).
/// Throws BuildError for non-compact exponents (k >= 7/2) or when no support
/// radius is found before r_max.
VPSolution build_vp_polytrope(const ansatz::AnsatzProfile& a, double central_depth,
                              const numerics::Tolerances& tol);

GalileanInvariants vp_invariants(const VPSolution& s);

/// M' = M, Q' = Q - M u, H' = H - u.Q + M|u|^2/2 (E_kin likewise, E_pot fixed).
GalileanInvariants galilean_boost(const GalileanInvariants& inv, const std::array<double, 3>& u);

report::VirialReport vp_report(const VPSolution& s,
                               std::span<const std::array<double, 3>> boosts = {});

}  // namespace kinequil::vp
