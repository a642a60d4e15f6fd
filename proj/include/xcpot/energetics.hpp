#pragma once

#include "xcpot/orbitals.hpp"

namespace xcpot {

// Hartree-Fock energy split E = T + E_ne + J + X (hartree):
//   T = 1/2 sum_i \int (u_i')^2,   E_ne = -Z \int rho/r,
//   J = 1/2 (rho|rho),             X = -1/2 sum_ij (u_i u_j | u_i u_j)
// with (f|g) the radial max-kernel double integral.
struct EnergyBreakdown {
    double kinetic = 0.0;
    double nuclear = 0.0;
    double hartree = 0.0;
    double exchange = 0.0;
    double total = 0.0;
};

EnergyBreakdown hf_energy(const OrbitalSet& phi, double Z);

// A-priori Coulomb bounds in the radial reduction; each margin is
// (right-hand side) - (left-hand side) and must be >= -tolerance:
//   |\int rho/r|                    <= sqrt(N) sqrt(2T)
//   \int\int gamma^2 / max(r,r')    <= \int\int rho rho' / max(r,r')
//   \int\int rho rho' / max(r,r')   <= N^{3/2} sqrt(2T)
struct BoundReport {
    double nuclear_margin = 0.0;
    double exchange_margin = 0.0;
    double hartree_margin = 0.0;
    bool ok = false;
};

BoundReport bound_checks(const OrbitalSet& phi, double Z);

}  // namespace xcpot
