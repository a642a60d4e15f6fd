#include "xcpot/grid.hpp"

#include <cmath>
#include <sstream>

namespace xcpot {

namespace {

// Solve expm1(n h)/expm1(h) = ratio for h by bisection.  The left side is
// strictly increasing in h, so the root is unique.
double solve_step(int n, double ratio) {
    auto f = [&](double h) {
        double num = n * h > 600.0 ? std::exp(600.0) : std::expm1(n * h);
        return num / std::expm1(h) - ratio;
    };
    double lo = 1e-12, hi = 1.0;
    if (f(lo) > 0.0 || f(hi) < 0.0) throw ParameterError("log grid: cannot bracket step size");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) <= 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

RadialGrid build_grid(int n, double r_max, GridKind kind, double r1) {
    if (r_max <= 0.0) throw ParameterError("build_grid: r_max must be positive");
    RadialGrid g;
    g.kind = kind;
    g.n = n;
    g.r_max = r_max;
    if (kind == GridKind::Uniform) {
        if (n < 4) throw ParameterError("build_grid: uniform grid needs n >= 4");
        g.r1 = r_max / n;
        g.h = r_max / n;
        g.r = Vec::LinSpaced(n, g.h, r_max);
        g.rp = Vec::Ones(n);
        g.w = Vec::Constant(n, g.h);
        g.w[n - 1] = 0.5 * g.h;  // trapezoid end; f(0) = 0 handles the inner end
        g.kink = (g.h * g.h / 12.0) * g.r.array().square().inverse();
        return g;
    }
    if (n < 16) throw ParameterError("build_grid: log grid needs n >= 16");
    if (r1 <= 0.0 || r1 >= r_max) throw ParameterError("build_grid: need 0 < r1 < r_max");
    g.r1 = r1;
    g.h = solve_step(n, r_max / r1);
    g.A = r1 / std::expm1(g.h);
    g.r.resize(n);
    g.rp.resize(n);
    for (int k = 0; k < n; ++k) {
        double t = (k + 1) * g.h;
        g.r[k] = g.A * std::expm1(t);
        g.rp[k] = g.A * std::exp(t);
    }
    // Gregory-corrected trapezoid weights in t over nodes 0..n; the virtual
    // node 0 carries the linear extrapolation g0 = 2 g1 - g2.
    Vec wt = Vec::Constant(n + 1, g.h);
    const double cend[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    for (int i = 0; i < 3; ++i) {
        wt[i] = cend[i] * g.h;
        wt[n - i] = cend[i] * g.h;
    }
    g.w.resize(n);
    for (int k = 0; k < n; ++k) g.w[k] = wt[k + 1];
    g.w[0] += 2.0 * wt[0];
    g.w[1] -= wt[0];
    g.w.array() *= g.rp.array();
    g.kink = (g.h * g.h / 12.0) * (g.rp.array() / g.r.array()).square();
    return g;
}

RadialGrid default_grid(int n) { return build_grid(n, 50.0, GridKind::Log, 1e-5); }

void check_on_grid(const RadialGrid& g, const Vec& f, const char* what) {
    if (f.size() != g.n) {
        std::ostringstream os;
        os << what << ": function has " << f.size() << " samples, grid has " << g.n;
        throw ShapeError(os.str());
    }
}

double integrate(const RadialGrid& g, const Vec& f) {
    check_on_grid(g, f, "integrate");
    return g.w.dot(f);
}

Vec derivative(const RadialGrid& g, const Vec& u) {
    check_on_grid(g, u, "derivative");
    const int n = g.n;
    const double h = g.h;
    // Work on the extended array with the exact boundary value u(t=0) = 0.
    Vec ue(n + 1);
    ue[0] = 0.0;
    ue.tail(n) = u;
    Vec du(n + 1);
    for (int i = 2; i <= n - 2; ++i)
        du[i] = (ue[i - 2] - 8.0 * ue[i - 1] + 8.0 * ue[i + 1] - ue[i + 2]) / (12.0 * h);
    auto onesided = [&](int i, int dir) {
        // Fourth-order one-sided formulas at offset 0 and 1 from the edge.
        static const double f0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
        static const double f1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};
        const double* c = (dir > 0 ? (i == 0 ? f0 : f1) : (i == n ? f0 : f1));
        double s = 0.0;
        int base = dir > 0 ? 0 : n;
        for (int j = 0; j < 5; ++j) s += c[j] * ue[base + dir * j];
        return dir * s / (12.0 * h);
    };
    du[0] = onesided(0, +1);
    du[1] = onesided(1, +1);
    du[n] = onesided(n, -1);
    du[n - 1] = onesided(n - 1, -1);
    Vec out = du.tail(n);
    if (g.kind == GridKind::Log) out.array() /= g.rp.array();
    return out;
}

Vec second_derivative(const RadialGrid& g, const Vec& u) {
    check_on_grid(g, u, "second_derivative");
    const int n = g.n;
    const double h = g.h;
    Vec ue(n + 1);
    ue[0] = 0.0;
    ue.tail(n) = u;
    Vec dt(n + 1), dtt(n + 1);
    for (int i = 2; i <= n - 2; ++i) {
        dt[i] = (ue[i - 2] - 8.0 * ue[i - 1] + 8.0 * ue[i + 1] - ue[i + 2]) / (12.0 * h);
        dtt[i] = (-ue[i - 2] + 16.0 * ue[i - 1] - 30.0 * ue[i] + 16.0 * ue[i + 1] - ue[i + 2]) /
                 (12.0 * h * h);
    }
    auto lo2 = [&](int i) {
        dt[i] = (ue[i + 1] - (i > 0 ? ue[i - 1] : 0.0)) / (2.0 * h);
        dtt[i] = (ue[i + 1] - 2.0 * ue[i] + (i > 0 ? ue[i - 1] : 0.0)) / (h * h);
    };
    lo2(1);
    lo2(n - 1);
    dt[0] = dtt[0] = 0.0;
    dt[n] = (3.0 * ue[n] - 4.0 * ue[n - 1] + ue[n - 2]) / (2.0 * h);
    dtt[n] = (2.0 * ue[n] - 5.0 * ue[n - 1] + 4.0 * ue[n - 2] - ue[n - 3]) / (h * h);
    Vec out(n);
    if (g.kind == GridKind::Log) {
        // r = A(e^t - 1):  u_rr = (u_tt - u_t) / r'^2.
        for (int k = 0; k < n; ++k) out[k] = (dtt[k + 1] - dt[k + 1]) / (g.rp[k] * g.rp[k]);
    } else {
        for (int k = 0; k < n; ++k) out[k] = dtt[k + 1];
    }
    return out;
}

}  // namespace xcpot
