#pragma once

#include "xcpot/grid.hpp"

namespace xcpot {

// Orthonormal radial orbitals in u-representation, u_i(r) = r phi_i(r),
// together with their eigenvalues (when they come from an eigensolve) and the
// cached line density rho(r) = sum_i u_i(r)^2 (so that rho_3D = rho / r^2).
//
// Orbitals are quadrature-orthonormalized (Loewdin) at construction; each
// column is sign-fixed so that its first sample of significant magnitude is
// positive.
struct OrbitalSet {
    const RadialGrid* g = nullptr;
    int N = 0;
    Mat U;    // n x N
    Vec eps;  // length N; may be empty for synthetic sets
    Vec rho;  // length n

    const Vec col(int i) const { return U.col(i); }

    // Relative density floor: potentials defined through division by rho are
    // set to exactly 0 where rho < floor() (the convention for the null set
    // of rho), far below any physically meaningful tail value.
    double floor() const { return 1e-45 * rho.maxCoeff(); }
};

// Loewdin-orthonormalize the columns of U in the grid quadrature metric,
// sign-fix, validate, and cache rho.  eps may be empty.
OrbitalSet make_orbitals(const RadialGrid& g, Mat U, Vec eps);

// Overlap deviation max_ij |<u_i,u_j> - delta_ij| (diagnostic).
double overlap_deviation(const OrbitalSet& phi);

void validate(const OrbitalSet& phi);

}  // namespace xcpot
