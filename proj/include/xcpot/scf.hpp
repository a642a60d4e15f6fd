#pragma once

#include <vector>

#include "xcpot/energetics.hpp"
#include "xcpot/exchange.hpp"
#include "xcpot/hamiltonian.hpp"

namespace xcpot {

enum class Method { Hf, Slater, Kli, Elp };

struct ScfConfig {
    double Z = 1.0;
    int N = 1;
    Method method = Method::Slater;
    double theta = 0.3;                // potential (or density) mixing in (0,1]
    double tol_density = 1e-8;         // L1 norm of the density change
    int max_iter = 300;                // per eta stage
    std::vector<double> eta_schedule = {1e-1, 1e-2, 1e-3, 0.0};
    KliGauge kli_gauge = KliGauge::Homo;
    ElpGauge elp_gauge = ElpGauge::Trace;

    void validate() const;  // Z >= N >= 1, theta in (0,1], schedule decreasing to 0
};

struct ScfReport {
    bool converged = false;
    int iterations = 0;                   // total over all eta stages
    std::vector<int> iterations_per_eta;  // slater continuation bookkeeping
    OrbitalSet phi;                       // occupied orbitals (lowest N)
    Vec eps_ext;                          // lowest N+2 eigenvalues of the final operator
    LocalPotential v_x;                   // final local exchange (hf: Slater average)
    LocalPotential v_loc;                 // mixed total local potential v_H + v_x (local methods)
    EnergyBreakdown energy;               // E^HF(Phi) with the true nonlocal exchange
    std::vector<double> history;          // density residual per iteration
    double gap = 0.0;                     // eps_{N+1} - eps_N
    bool gap_warning = false;             // gap < 1e-8 (aufbau ambiguity)
};

// Fixed point of Phi -> lowest_eigenpairs(-1/2 d^2 - Z/r + V_H[rho] + v_x[Phi])
// with v_x in {slater(eta), kli, elp}.  For slater the eta schedule is
// traversed with warm starts (nuclear charge Z+eta, denominator rho+eta per
// the regularized fixed-point map); the final solve uses eta = 0.  Mixing
// acts on the total local potential, so each iterate's orbitals stay exactly
// orthonormal.  N+2 eigenpairs are computed each iteration; occupation is
// always the lowest N.
ScfReport scf_local(const RadialGrid& g, const ScfConfig& cfg);

// Radial Hartree-Fock with the nonlocal exchange operator.  The Fock operator
// F = H[-Z/r + V_H] + K_Phi is diagonalized by a Davidson iteration
// preconditioned with shifted solves of the local part; density mixing.
ScfReport scf_hartree_fock(const RadialGrid& g, const ScfConfig& cfg);

// Damped fixed-point update (1-theta) * previous + theta * next.
Vec mix(const Vec& previous, const Vec& next, double theta);

}  // namespace xcpot
