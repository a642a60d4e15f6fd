#include "xcpot/coulomb.hpp"

#include <cmath>
#include <limits>

namespace xcpot {

Vec coulomb_potential(const RadialGrid& g, const Vec& f) {
    check_on_grid(g, f, "coulomb_potential");
    const int n = g.n;
    Vec out(n);
    // prefix P_k = sum_{l<=k} w_l f_l, suffix S_k = sum_{l>k} w_l f_l / r_l.
    double p = 0.0;
    Vec pre(n);
    for (int k = 0; k < n; ++k) {
        p += g.w[k] * f[k];
        pre[k] = p;
    }
    double s = 0.0;
    for (int k = n - 1; k >= 0; --k) {
        out[k] = pre[k] / g.r[k] + s - g.kink[k] * f[k];
        s += g.w[k] * f[k] / g.r[k];
    }
    return out;
}

double radial_coulomb(const RadialGrid& g, const Vec& f, const Vec& q) {
    check_on_grid(g, f, "radial_coulomb");
    check_on_grid(g, q, "radial_coulomb");
    Vec v = coulomb_potential(g, q);
    return (g.w.array() * f.array() * v.array()).sum();
}

double tail_fit(const RadialGrid& g, const Vec& v, double r_lo, double r_hi) {
    check_on_grid(g, v, "tail_fit");
    double num = 0.0, den = 0.0;
    int used = 0;
    for (int k = 0; k < g.n; ++k) {
        if (g.r[k] < r_lo || g.r[k] > r_hi || v[k] == 0.0) continue;
        num += v[k] / g.r[k];
        den += 1.0 / (g.r[k] * g.r[k]);
        ++used;
    }
    if (used == 0 || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return num / den;
}

}  // namespace xcpot
