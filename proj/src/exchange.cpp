#include "xcpot/exchange.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace xcpot {

LocalPotential make_potential(const RadialGrid& g, Vec v, std::string gauge) {
    check_on_grid(g, v, "make_potential");
    if (!v.allFinite()) throw NumericalError("make_potential: non-finite values");
    LocalPotential p;
    p.g = &g;
    p.v = std::move(v);
    p.gauge = std::move(gauge);
    p.c_tail = tail_fit(g, p.v, 0.5 * g.r_max, 0.9 * g.r_max);
    return p;
}

Vec ExchangeBlock::apply(const Vec& u) const {
    const RadialGrid& g = *phi.g;
    check_on_grid(g, u, "ExchangeBlock::apply");
    Vec out = Vec::Zero(g.n);
    for (int i = 0; i < phi.N; ++i) {
        Vec vi = coulomb_potential(g, Vec(phi.U.col(i).array() * u.array()));
        out.array() -= phi.U.col(i).array() * vi.array();
    }
    return out;
}

ExchangeBlock make_exchange(const OrbitalSet& phi) {
    const RadialGrid& g = *phi.g;
    const int N = phi.N;
    ExchangeBlock ex;
    ex.phi = phi;
    ex.V.reserve(static_cast<size_t>(N) * (N + 1) / 2);
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j)
            ex.V.push_back(coulomb_potential(g, Vec(phi.U.col(i).array() * phi.U.col(j).array())));
    ex.K = Mat::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            double s = 0.0;
            for (int m = 0; m < N; ++m) {
                Vec uim = phi.U.col(i).array() * phi.U.col(m).array();
                s += (g.w.array() * uim.array() * ex.vij(m, j).array()).sum();
            }
            ex.K(i, j) = ex.K(j, i) = -s;
        }
    return ex;
}

Mat exchange_matrix(const OrbitalSet& phi) { return make_exchange(phi).K; }

LocalPotential slater_potential(const OrbitalSet& phi, double eta, const ExchangeBlock* ex) {
    if (eta < 0.0) throw ParameterError("slater_potential: eta must be nonnegative");
    const RadialGrid& g = *phi.g;
    ExchangeBlock own;
    if (!ex) {
        own = make_exchange(phi);
        ex = &own;
    }
    const int N = phi.N;
    Vec num = Vec::Zero(g.n);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            num.array() += phi.U.col(i).array() * phi.U.col(j).array() * ex->vij(i, j).array();
    Vec v(g.n);
    if (eta > 0.0) {
        v = -num.array() / (phi.rho.array() + eta);
    } else {
        const double fl = phi.floor();
        for (int k = 0; k < g.n; ++k) v[k] = phi.rho[k] >= fl ? -num[k] / phi.rho[k] : 0.0;
    }
    return make_potential(g, std::move(v), "none");
}

Vec kernel_projected_solve(const Mat& ImB, const Vec& b, int* kernel_dim) {
    Eigen::SelfAdjointEigenSolver<Mat> es(ImB);
    const Vec& lam = es.eigenvalues();
    double thr = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
    Vec x = Vec::Zero(b.size());
    int kd = 0;
    for (int i = 0; i < lam.size(); ++i) {
        if (std::abs(lam[i]) <= thr) {
            ++kd;
            continue;
        }
        x += (es.eigenvectors().col(i).dot(b) / lam[i]) * es.eigenvectors().col(i);
    }
    if (kernel_dim) *kernel_dim = kd;
    return x;
}

std::pair<LocalPotential, KliSolution> kli_potential(const OrbitalSet& phi,
                                                     const ExchangeBlock& ex, KliGauge gauge) {
    const RadialGrid& g = *phi.g;
    const int N = phi.N;
    const double fl = phi.floor();
    LocalPotential vS = slater_potential(phi, 0.0, &ex);

    KliSolution sol;
    sol.S = Mat::Zero(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = i; j < N; ++j) {
            double s = 0.0;
            for (int k = 0; k < g.n; ++k)
                if (phi.rho[k] >= fl)
                    s += g.w[k] * phi.U(k, i) * phi.U(k, i) * phi.U(k, j) * phi.U(k, j) /
                         phi.rho[k];
            sol.S(i, j) = sol.S(j, i) = s;
        }
    sol.beta.resize(N);
    for (int i = 0; i < N; ++i) {
        double b = (g.w.array() * vS.v.array() * phi.U.col(i).array().square()).sum();
        for (int j = 0; j < N; ++j) b -= sol.S(i, j) * ex.K(j, j);
        sol.beta[i] = b;
    }
    Mat ImS = Mat::Identity(N, N) - sol.S;
    int kd = 0;
    Vec alpha = kernel_projected_solve(ImS, sol.beta, &kd);
    if (kd != 1)
        throw DegenerateDensityError("kli_potential: (I-S) null space has dimension " +
                                     std::to_string(kd));
    sol.residual = (ImS * alpha - sol.beta).norm();

    sol.lambda = 0.0;
    if (gauge == KliGauge::Homo) {
        // Shift so that alpha_N = K_NN: the HOMO correction vanishes and the
        // potential keeps the -1/r Slater tail.
        sol.lambda = ex.K(N - 1, N - 1) - alpha[N - 1];
        alpha.array() += sol.lambda;
    }
    sol.alpha = alpha;

    Vec v = vS.v;
    for (int k = 0; k < g.n; ++k) {
        if (phi.rho[k] < fl) continue;
        double corr = 0.0;
        for (int i = 0; i < N; ++i)
            corr += (alpha[i] - ex.K(i, i)) * phi.U(k, i) * phi.U(k, i) / phi.rho[k];
        v[k] += corr;
    }
    return {make_potential(g, std::move(v), gauge == KliGauge::Homo ? "homo" : "raw"),
            std::move(sol)};
}

std::pair<LocalPotential, ElpSolution> elp_potential(const OrbitalSet& phi,
                                                     const ExchangeBlock& ex, ElpGauge gauge) {
    const RadialGrid& g = *phi.g;
    const int N = phi.N;
    const double fl = phi.floor();
    LocalPotential vS = slater_potential(phi, 0.0, &ex);

    ElpSolution sol;
    // A_{(kl),(ij)} = \int u_k u_l u_i u_j / rho, flattened N^2 x N^2.
    sol.A = Mat::Zero(N * N, N * N);
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l)
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) {
                    if (l * N + k < k * N + l || j * N + i < i * N + j) continue;  // fill below
                    double s = 0.0;
                    for (int p = 0; p < g.n; ++p)
                        if (phi.rho[p] >= fl)
                            s += g.w[p] * phi.U(p, k) * phi.U(p, l) * phi.U(p, i) *
                                 phi.U(p, j) / phi.rho[p];
                    for (int a : {k * N + l, l * N + k})
                        for (int b : {i * N + j, j * N + i}) sol.A(a, b) = s;
                }
    sol.G = Mat::Zero(N, N);
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l) {
            double s = (g.w.array() * vS.v.array() * phi.U.col(k).array() *
                        phi.U.col(l).array())
                           .sum();
            for (int i = 0; i < N; ++i)
                for (int j = 0; j < N; ++j) s -= sol.A(k * N + l, i * N + j) * ex.K(i, j);
            sol.G(k, l) = s;
        }
    Mat ImA = Mat::Identity(N * N, N * N) - sol.A;
    Eigen::Map<const Vec> gvec(sol.G.data(), N * N);
    int kd = 0;
    Vec mvec = kernel_projected_solve(ImA, gvec, &kd);
    if (kd != 1)
        throw DegenerateDensityError("elp_potential: (I-A) null space has dimension " +
                                     std::to_string(kd));
    sol.residual = (ImA * mvec - gvec).norm();
    Mat M = Eigen::Map<Mat>(mvec.data(), N, N);
    M = 0.5 * (M + M.transpose()).eval();
    if (gauge == ElpGauge::Raw) {
        // Raw convention: pick the representative with M_NN = K_NN.
        double lam = ex.K(N - 1, N - 1) - M(N - 1, N - 1);
        M += lam * Mat::Identity(N, N);
    }
    // Trace convention is the minimum-norm solution itself (M orthogonal to I).
    sol.M = M;

    Vec v = vS.v;
    for (int k = 0; k < g.n; ++k) {
        if (phi.rho[k] < fl) continue;
        double corr = 0.0;
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                corr += (M(i, j) - ex.K(i, j)) * phi.U(k, i) * phi.U(k, j) / phi.rho[k];
        v[k] += corr;
    }
    return {make_potential(g, std::move(v), gauge == ElpGauge::Trace ? "trace" : "raw"),
            std::move(sol)};
}

namespace {

// f_i = (v - K) u_i for all occupied orbitals, plus M~_ij = <u_i|(v-K)|u_j>.
struct VmKData {
    Mat F;   // n x N
    Mat Mt;  // N x N
};

VmKData vmk(const OrbitalSet& phi, const Vec& v, const ExchangeBlock& ex) {
    const RadialGrid& g = *phi.g;
    const int N = phi.N;
    VmKData d;
    d.F.resize(g.n, N);
    for (int i = 0; i < N; ++i)
        d.F.col(i) = Vec(v.array() * phi.U.col(i).array()) - ex.apply(phi.U.col(i));
    d.Mt.resize(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            d.Mt(i, j) = (g.w.array() * phi.U.col(i).array() * d.F.col(j).array()).sum();
    return d;
}

}  // namespace

std::pair<double, double> objective_slater(const OrbitalSet& phi, const Vec& v,
                                           const ExchangeBlock* ex) {
    const RadialGrid& g = *phi.g;
    check_on_grid(g, v, "objective_slater");
    ExchangeBlock own;
    if (!ex) {
        own = make_exchange(phi);
        ex = &own;
    }
    const int N = phi.N;
    VmKData d = vmk(phi, v, *ex);
    double IS = 0.0;
    for (int i = 0; i < N; ++i) IS += 0.5 * (g.w.array() * d.F.col(i).array().square()).sum();
    // J_S = 1/2 sum_{kl} w_k w_l gamma_kl^2 (v_k + khat_kl)^2 with the same
    // normalized discrete kernel used by coulomb_potential.
    double JS = 0.0;
    for (int k = 0; k < g.n; ++k) {
        double row = 0.0;
        for (int l = 0; l < g.n; ++l) {
            double gam = 0.0;
            for (int i = 0; i < N; ++i) gam += phi.U(k, i) * phi.U(l, i);
            double t = v[k] + coulomb_kernel_entry(g, k, l);
            row += g.w[l] * gam * gam * t * t;
        }
        JS += 0.5 * g.w[k] * row;
    }
    return {IS, JS};
}

double objective_kli(const OrbitalSet& phi, const Vec& v, const ExchangeBlock* ex) {
    const RadialGrid& g = *phi.g;
    check_on_grid(g, v, "objective_kli");
    ExchangeBlock own;
    if (!ex) {
        own = make_exchange(phi);
        ex = &own;
    }
    VmKData d = vmk(phi, v, *ex);
    double IS = 0.0;
    for (int i = 0; i < phi.N; ++i)
        IS += 0.5 * (g.w.array() * d.F.col(i).array().square()).sum();
    return IS - 0.5 * d.Mt.diagonal().array().square().sum();
}

double objective_elp(const OrbitalSet& phi, const Vec& v, const ExchangeBlock* ex) {
    const RadialGrid& g = *phi.g;
    check_on_grid(g, v, "objective_elp");
    ExchangeBlock own;
    if (!ex) {
        own = make_exchange(phi);
        ex = &own;
    }
    VmKData d = vmk(phi, v, *ex);
    double AU2 = 0.0;
    for (int i = 0; i < phi.N; ++i)
        AU2 += (g.w.array() * d.F.col(i).array().square()).sum();
    // 1/2 ||[A,Ups]||^2 = ||A Ups||^2 - ||Ups A Ups||^2 for symmetric A.
    return AU2 - d.Mt.array().square().sum();
}

}  // namespace xcpot
