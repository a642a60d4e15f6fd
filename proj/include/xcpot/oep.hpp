#pragma once

#include <vector>

#include "xcpot/exchange.hpp"
#include "xcpot/hamiltonian.hpp"

namespace xcpot {

// OEP integral-equation residual
//   rho^W(r) = 2 sum_i u_i(r) [Q (eps_i - Q H_W Q)^{-1} Q (K - v_x) u_i](r),
// Q = 1 - projector on the occupied span.  rho^W vanishes iff v_x satisfies
// the OEP stationarity condition for the potential W.
struct OepResidual {
    const RadialGrid* g = nullptr;
    Vec values;                         // u-representation density-like function
    double integral = 0.0;              // \int rho^W dr (analytically 0)
    double l2_norm = 0.0;
    std::vector<int> solve_iterations;  // per-orbital CG counts (0 for dense path)
    std::vector<double> rhs_norms;      // per-orbital ||Q (K - v_x) u_i||
};

enum class OepSolver { Auto, Iterative, Dense };

// Phi must be (numerically) the lowest-N eigenfunctions of H_W with
// eigenvalues attached; the gap eps_{N+1} - eps_N of H_W must exceed 1e-8
// (otherwise AssumptionError).  The projected systems are SPD on Ran(Q) and
// solved by preconditioned conjugate gradients with re-orthogonalization
// every iteration (dense sum-over-states fallback below n = 256).
OepResidual oep_residual(const OrbitalSet& phi, const LocalPotential& W,
                         const LocalPotential& v_x, const ExchangeBlock& K,
                         OepSolver solver = OepSolver::Auto);

// Same evaluation with an arbitrary right-hand-side family
// rhs_i = (perturbation operator) u_i; used for the trivial/linearity checks.
OepResidual oep_residual_rhs(const OrbitalSet& phi, const LocalPotential& W,
                             const std::vector<Vec>& rhs, OepSolver solver = OepSolver::Auto);

// W = (sum_i u_i u_i'' + sum_{i>=2} c_i u_i^2) / (2 rho) on the grid, zero
// where rho <= floor; gauge eps_1 = 0.  c must have c_1 = 0, c_i >= 0.
LocalPotential reconstruct_potential(const OrbitalSet& phi, const Vec& c);

// Per-pair residuals || (u_i u_1' - u_1 u_i')' - 2 (eps_i - eps_1) u_1 u_i ||_2
// for i >= 2; near zero iff all orbitals are eigenfunctions of one common
// local potential.  Empty for N = 1.
std::vector<double> wronskian_residual(const OrbitalSet& phi);

}  // namespace xcpot
