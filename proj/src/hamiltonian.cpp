#include "xcpot/hamiltonian.hpp"

#include <cmath>
#include <vector>

extern "C" {
void dstebz_(const char* range, const char* order, const int* n, const double* vl,
             const double* vu, const int* il, const int* iu, const double* abstol,
             const double* d, const double* e, int* m, int* nsplit, double* w, int* iblock,
             int* isplit, double* work, int* iwork, int* info);
void dstein_(const int* n, const double* d, const double* e, const int* m, const double* w,
             const int* iblock, const int* isplit, double* z, const int* ldz, double* work,
             int* iwork, int* ifail, int* info);
}

namespace xcpot {

namespace {

// General tridiagonal solve with partial pivoting (LU with one fill-in
// superdiagonal); the shifted Numerov systems sit near eigenvalues, where
// pivoting matters.
Vec tridiag_solve(Vec dl, Vec d, Vec du, Vec b) {
    const int n = static_cast<int>(d.size());
    // Inverse iteration intentionally solves near-singular systems; an exact
    // zero pivot is replaced by a tiny multiple of the matrix scale (the usual
    // dgttrf convention), which steers the solution into the singular
    // direction instead of failing.
    double scale = d.cwiseAbs().maxCoeff() + dl.cwiseAbs().maxCoeff() + du.cwiseAbs().maxCoeff();
    if (scale == 0.0) throw NumericalError("tridiag_solve: zero matrix");
    const double tiny = 1e-300 + 2.3e-16 * scale;
    Vec du2 = Vec::Zero(n);  // fill-in
    for (int k = 0; k < n - 1; ++k) {
        if (std::abs(dl[k]) > std::abs(d[k])) {
            std::swap(d[k], dl[k]);
            double t = du[k];
            du[k] = d[k + 1];
            d[k + 1] = t;
            if (k + 1 < n - 1) {
                du2[k] = du[k + 1];
                du[k + 1] = 0.0;
            }
            std::swap(b[k], b[k + 1]);
        }
        if (d[k] == 0.0) d[k] = tiny;
        double m = dl[k] / d[k];
        d[k + 1] -= m * du[k];
        if (k + 1 < n - 1) du[k + 1] -= m * du2[k];
        b[k + 1] -= m * b[k];
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;
    Vec x(n);
    x[n - 1] = b[n - 1] / d[n - 1];
    if (n > 1) x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (int k = n - 3; k >= 0; --k)
        x[k] = (b[k] - du[k] * x[k + 1] - du2[k] * x[k + 2]) / d[k];
    return x;
}

// M = tridiag(1,10,1)/12: symmetric positive definite, diagonally dominant.
Vec apply_M(const Vec& x) {
    const int n = static_cast<int>(x.size());
    Vec y = 10.0 * x;
    y.head(n - 1) += x.tail(n - 1);
    y.tail(n - 1) += x.head(n - 1);
    return y / 12.0;
}

Vec solve_M(const Vec& b) {
    const int n = static_cast<int>(b.size());
    // Thomas algorithm; no pivoting needed (strict diagonal dominance).
    Vec c(n), x(n);
    double beta = 10.0 / 12.0;
    x[0] = b[0] / beta;
    for (int k = 1; k < n; ++k) {
        c[k] = (1.0 / 12.0) / beta;
        beta = 10.0 / 12.0 - (1.0 / 12.0) * c[k];
        x[k] = (b[k] - (1.0 / 12.0) * x[k - 1]) / beta;
    }
    for (int k = n - 2; k >= 0; --k) x[k] -= c[k + 1] * x[k + 1];
    return x;
}

Vec apply_P(const Vec& x, double h) {
    const int n = static_cast<int>(x.size());
    Vec y = -2.0 * x;
    y.head(n - 1) += x.tail(n - 1);
    y.tail(n - 1) += x.head(n - 1);
    return y / (h * h);
}

}  // namespace

RadialHamiltonian::RadialHamiltonian(const RadialGrid& grid, Vec W_in) : g(&grid) {
    check_on_grid(grid, W_in, "RadialHamiltonian");
    if (!W_in.allFinite()) throw NumericalError("RadialHamiltonian: non-finite potential");
    W = std::move(W_in);
    if (grid.kind == GridKind::Log) {
        Q = 2.0 * (0.125 + (grid.rp.array().square() * W.array()));
        S = 2.0 * grid.rp.array().square();
    } else {
        Q = 2.0 * W;
        S = Vec::Constant(grid.n, 2.0);
    }
}

Vec RadialHamiltonian::apply(const Vec& u) const {
    check_on_grid(*g, u, "RadialHamiltonian::apply");
    Vec v = g->kind == GridKind::Log
                ? Vec(u.array() / g->rp.array().sqrt())
                : u;
    Vec hv = (Q.array() * v.array() - solve_M(apply_P(v, g->h)).array()) / S.array();
    if (g->kind == GridKind::Log) hv.array() *= g->rp.array().sqrt();
    return hv;
}

Vec RadialHamiltonian::shifted_solve(double sigma, const Vec& rhs) const {
    check_on_grid(*g, rhs, "RadialHamiltonian::shifted_solve");
    const int n = g->n;
    const double h = g->h;
    Vec r = g->kind == GridKind::Log
                ? Vec(rhs.array() / g->rp.array().sqrt())
                : rhs;
    Vec b = apply_M(Vec(S.array() * r.array()));
    Vec q = Q - sigma * S;
    Vec dl(n - 1), dd(n), du(n - 1);
    for (int k = 0; k < n - 1; ++k) {
        dl[k] = q[k] / 12.0 - 1.0 / (h * h);
        du[k] = q[k + 1] / 12.0 - 1.0 / (h * h);
    }
    dd = (10.0 / 12.0) * q.array() + 2.0 / (h * h);
    Vec x = tridiag_solve(dl, dd, du, b);
    if (g->kind == GridKind::Log) x.array() *= g->rp.array().sqrt();
    return x;
}

EigenPairs lowest_eigenpairs(const RadialHamiltonian& H, int N) {
    const RadialGrid& g = *H.g;
    const int n = g.n;
    if (N < 1 || N >= n) throw ParameterError("lowest_eigenpairs: need 1 <= N < n");
    const int m_want = std::min(N + 1, n - 1);

    // Second-order symmetric tridiagonal seed in the Liouville-transformed
    // variable; bisection with safe-minimum tolerance for relative accuracy.
    Vec d(n), e(n - 1);
    if (g.kind == GridKind::Log) {
        for (int k = 0; k < n; ++k)
            d[k] = (1.0 / (g.h * g.h) + 0.5 * H.Q[k]) / (g.rp[k] * g.rp[k]);
        for (int k = 0; k < n - 1; ++k)
            e[k] = -0.5 / (g.h * g.h) / (g.rp[k] * g.rp[k + 1]);
    } else {
        for (int k = 0; k < n; ++k) d[k] = 1.0 / (g.h * g.h) + H.W[k];
        e.setConstant(-0.5 / (g.h * g.h));
    }
    const char range = 'I', order = 'B';
    const double vl = 0.0, vu = 0.0, abstol = 2e-308;
    const int il = 1, iu = m_want;
    int m = 0, nsplit = 0, info = 0;
    std::vector<double> wval(n), work(4 * n);
    std::vector<int> iblock(n), isplit(n), iwork(3 * n);
    dstebz_(&range, &order, &n, &vl, &vu, &il, &iu, &abstol, d.data(), e.data(), &m, &nsplit,
            wval.data(), iblock.data(), isplit.data(), work.data(), iwork.data(), &info);
    if (info != 0 || m < m_want) throw NumericalError("lowest_eigenpairs: dstebz failed");

    Mat Z(n, m_want);
    {
        std::vector<double> work5(5 * n);
        std::vector<int> iwork1(n), ifail(m_want);
        int info2 = 0;
        dstein_(&n, d.data(), e.data(), &m_want, wval.data(), iblock.data(), isplit.data(),
                Z.data(), &n, work5.data(), iwork1.data(), ifail.data(), &info2);
        if (info2 != 0) throw NumericalError("lowest_eigenpairs: dstein failed");
    }

    // Numerov refinement: fixed-shift inverse iteration on the fourth-order
    // pencil, seeded by the second-order vectors.
    const double h = g.h;
    auto rayleigh = [&](const Vec& v) {
        double num = v.dot(Vec(H.Q.array() * v.array())) - v.dot(solve_M(apply_P(v, h)));
        double den = v.dot(Vec(H.S.array() * v.array()));
        return num / den;
    };
    Vec eps(m_want);
    Mat U(n, m_want);
    for (int i = 0; i < m_want; ++i) {
        Vec v = g.kind == GridKind::Log ? Vec(Z.col(i).array() / g.rp.array()) : Vec(Z.col(i));
        double ei = rayleigh(v);
        for (int it = 0; it < 3; ++it) {
            Vec b = apply_M(Vec(H.S.array() * v.array()));
            Vec q = H.Q - ei * H.S;
            Vec dl(n - 1), dd(n), du(n - 1);
            for (int k = 0; k < n - 1; ++k) {
                dl[k] = q[k] / 12.0 - 1.0 / (h * h);
                du[k] = q[k + 1] / 12.0 - 1.0 / (h * h);
            }
            dd = (10.0 / 12.0) * q.array() + 2.0 / (h * h);
            Vec x = tridiag_solve(dl, dd, du, b);
            v = x / std::sqrt(x.dot(Vec(H.S.array() * x.array())));
            ei = rayleigh(v);
        }
        eps[i] = ei;
        U.col(i) = g.kind == GridKind::Log ? Vec(v.array() * g.rp.array().sqrt()) : v;
    }

    EigenPairs out;
    out.gap = m_want > N ? eps[N] - eps[N - 1] : 0.0;
    out.gap_warning = m_want > N && out.gap < 1e-8;
    out.eps = eps.head(N);
    out.phi = make_orbitals(g, U.leftCols(N), eps.head(N));
    return out;
}

}  // namespace xcpot
