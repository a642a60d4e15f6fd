#pragma once

#include <string>
#include <utility>
#include <vector>

#include "xcpot/coulomb.hpp"
#include "xcpot/orbitals.hpp"

namespace xcpot {

// Grid-sampled multiplicative potential with its gauge convention tag and
// the tail coefficient of the least-squares fit v ~ c_tail / r over the
// outer window [0.5, 0.9] r_max (zero-valued floor points excluded).
struct LocalPotential {
    const RadialGrid* g = nullptr;
    Vec v;
    std::string gauge = "none";
    double c_tail = 0.0;
};

LocalPotential make_potential(const RadialGrid& g, Vec v, std::string gauge = "none");

// Nonlocal exchange operator data for a fixed orbital set: the matrix
// K_ij = <phi_i|K|phi_j| and the cached pair potentials
// V_ij(r) = \int u_i u_j / max(r,r') dr'.
struct ExchangeBlock {
    OrbitalSet phi;           // private copy; the applier must outlive callers
    std::vector<Vec> V;       // packed upper triangle, index via vij()
    Mat K;                    // N x N, symmetric, diagonal <= 0

    const Vec& vij(int i, int j) const {
        if (i > j) std::swap(i, j);
        return V[static_cast<size_t>(i) * phi.N - i * (i - 1) / 2 + (j - i)];
    }
    // K_Phi u = -sum_i u_i(r) \int u_i(r') u(r') / max(r,r') dr'.
    Vec apply(const Vec& u) const;
};

ExchangeBlock make_exchange(const OrbitalSet& phi);

// Exchange matrix alone: K_ij = -sum_m radial_coulomb(u_i u_m, u_m u_j).
Mat exchange_matrix(const OrbitalSet& phi);

// Slater potential v(r) = -[sum_ij u_i u_j V_ij] / (rho + eta); for eta = 0
// the value is exactly 0 where rho < the orbital-set floor.
LocalPotential slater_potential(const OrbitalSet& phi, double eta,
                                const ExchangeBlock* ex = nullptr);

enum class KliGauge { Homo, Raw };
enum class ElpGauge { Trace, Raw };

struct KliSolution {
    Vec alpha;     // after any gauge shift
    Mat S;
    Vec beta;
    double lambda; // applied gauge constant
    double residual; // ||(I-S)alpha_raw - beta||
};

struct ElpSolution {
    Mat M;  // symmetric, after gauge
    Mat A;  // N^2 x N^2 flattening of A_{kl,ij}
    Mat G;
    double residual;
};

std::pair<LocalPotential, KliSolution> kli_potential(const OrbitalSet& phi,
                                                     const ExchangeBlock& ex,
                                                     KliGauge gauge = KliGauge::Homo);

std::pair<LocalPotential, ElpSolution> elp_potential(const OrbitalSet& phi,
                                                     const ExchangeBlock& ex,
                                                     ElpGauge gauge = ElpGauge::Trace);

// Hilbert-Schmidt variational objectives in the l=0 sector:
//   I_S  = 1/2 ||(v - K) Ups||^2
//   J_S  = 1/2 ||v Ups - K||^2           (kernels on the grid; full value)
//   J_KLI = I_S - 1/2 sum_i <phi_i|(v-K)|phi_i>^2
//   J_ELP = 1/2 ||[v - K, Ups]||^2
std::pair<double, double> objective_slater(const OrbitalSet& phi, const Vec& v,
                                           const ExchangeBlock* ex = nullptr);
double objective_kli(const OrbitalSet& phi, const Vec& v, const ExchangeBlock* ex = nullptr);
double objective_elp(const OrbitalSet& phi, const Vec& v, const ExchangeBlock* ex = nullptr);

// Least-squares solve of (I - B) x = b on the orthogonal complement of the
// kernel of the symmetric matrix (I - B); kernel_dim receives the number of
// eigenvalues below 1e-12 * max(1, spectral radius).  Used by KLI and ELP.
Vec kernel_projected_solve(const Mat& ImB, const Vec& b, int* kernel_dim);

}  // namespace xcpot
