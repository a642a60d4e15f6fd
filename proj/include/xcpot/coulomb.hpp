#pragma once

#include "xcpot/grid.hpp"

namespace xcpot {

// V[f](r_k) = \int f(r') / max(r_k, r') dr'.
//
// Discretization: the exactly symmetric, entrywise nonnegative kernel
//   K_{kl} = w_k w_l / max(r_k, r_l) - delta_{kl} w_k kink_k,
// applied as V = W^{-1} K f in O(n) via prefix/suffix sums.  The diagonal
// term is the Euler-Maclaurin correction for the derivative kink of the
// integrand at r' = r_k and restores fourth-order pointwise accuracy for
// integrands smooth in the transformed coordinate.
Vec coulomb_potential(const RadialGrid& g, const Vec& f);

// \int\int f(r) g(r') / max(r,r') dr dr' with the same discrete kernel;
// symmetric in (f, g) and nonnegative for f = g >= 0 by construction.
double radial_coulomb(const RadialGrid& g, const Vec& f, const Vec& q);

// Entry of the normalized discrete kernel K_{kl} / (w_k w_l); used by the
// Hilbert-Schmidt objective evaluations and the dense exchange assembly.
inline double coulomb_kernel_entry(const RadialGrid& g, int k, int l) {
    double v = 1.0 / std::max(g.r[k], g.r[l]);
    if (k == l) v -= g.kink[k] / g.w[k];
    return v;
}

// Least-squares coefficient c of v ~ c/r over window points r in [r_lo, r_hi]
// where v != 0; NaN when the window holds no usable point.
double tail_fit(const RadialGrid& g, const Vec& v, double r_lo, double r_hi);

}  // namespace xcpot
