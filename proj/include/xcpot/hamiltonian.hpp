#pragma once

#include "xcpot/grid.hpp"
#include "xcpot/orbitals.hpp"

namespace xcpot {

// H_W = -1/2 d^2/dr^2 + W(r) in u-representation with Dirichlet ends
// u(0) = u(r_max+) = 0.
//
// On the log grid the operator is handled through the Liouville transform
// u = sqrt(r') v, under which -1/2 v'' + (1/8 + r'^2 W) v = eps r'^2 v on a
// uniform t-grid.  Eigenvalues come from the symmetric three-point form
// (bisection with safe-minimum absolute tolerance, which attains high
// relative accuracy on this strongly graded problem) and are then refined to
// fourth order with the Numerov generalized pencil
//   (M Q - P) v = eps M S v,   M = tridiag(1,10,1)/12, P = tridiag(1,-2,1)/h^2,
//   Q = 2(1/8 + r'^2 W), S = 2 r'^2,
// via fixed-shift inverse iteration and Rayleigh quotients.
//
// apply()/shifted_solve() realize the same Numerov pencil, so eigen-residuals,
// SCF invariants and the OEP diagnostics all see one consistent operator.
// The operator is self-adjoint in the plain h*r' metric; its deviation from
// self-adjointness in the Gregory quadrature metric is confined to the six
// boundary nodes and is negligible for decaying states.
struct RadialHamiltonian {
    const RadialGrid* g = nullptr;
    Vec W;
    Vec Q, S;  // Numerov pencil arrays in v-space

    RadialHamiltonian(const RadialGrid& grid, Vec W_in);

    // H u, u-representation.
    Vec apply(const Vec& u) const;

    // (H - sigma)^{-1} rhs through the Numerov pencil (tridiagonal solve with
    // partial pivoting); u-representation on both sides.
    Vec shifted_solve(double sigma, const Vec& rhs) const;
};

struct EigenPairs {
    Vec eps;          // lowest N eigenvalues, ascending
    OrbitalSet phi;   // quadrature-orthonormal, sign-fixed eigenfunctions
    double gap;       // eps_{N+1} - eps_N
    bool gap_warning; // gap < 1e-8 (aufbau ambiguity)
};

EigenPairs lowest_eigenpairs(const RadialHamiltonian& H, int N);

}  // namespace xcpot
