#include "xcpot/oep.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace xcpot {

namespace {

// Orthogonalize against the occupied span in the quadrature metric.
Vec project_out(const OrbitalSet& phi, Vec y) {
    const RadialGrid& g = *phi.g;
    for (int j = 0; j < phi.N; ++j)
        y -= (g.w.array() * phi.U.col(j).array() * y.array()).sum() * phi.U.col(j);
    return y;
}

void check_gap_and_next(const OrbitalSet& phi, const RadialHamiltonian& H, double& eps_next) {
    if (phi.eps.size() != phi.N)
        throw ParameterError("oep_residual: orbital set carries no eigenvalues");
    EigenPairs ep = lowest_eigenpairs(H, phi.N);
    double gap = ep.gap;
    if (!(gap > 1e-8)) {
        std::ostringstream os;
        os << "oep_residual: aufbau gap " << gap << " violates the gap assumption (> 1e-8)";
        throw AssumptionError(os.str());
    }
    eps_next = ep.eps[phi.N - 1] + gap;
}

OepResidual residual_iterative(const OrbitalSet& phi, const RadialHamiltonian& H,
                               const std::vector<Vec>& rhs, double eps_next) {
    const RadialGrid& g = *phi.g;
    auto dot = [&](const Vec& a, const Vec& b) { return (g.w.array() * a.array() * b.array()).sum(); };

    OepResidual out;
    out.g = &g;
    out.values = Vec::Zero(g.n);
    for (int i = 0; i < phi.N; ++i) {
        Vec b = project_out(phi, rhs[i]);
        double bn = std::sqrt(dot(b, b));
        out.rhs_norms.push_back(bn);
        if (bn < 1e-300) {
            out.solve_iterations.push_back(0);
            continue;
        }
        const double eps_i = phi.eps[i];
        const double delta = eps_next - eps_i;
        auto Aop = [&](const Vec& x) {
            Vec y = project_out(phi, x);
            y = H.apply(y) - eps_i * y;
            return project_out(phi, y);
        };
        auto precond = [&](const Vec& x) {
            return project_out(phi, H.shifted_solve(eps_i - delta, project_out(phi, x)));
        };
        // PCG for A x = -b; A = Q (H - eps_i) Q is SPD on Ran(Q) under the gap
        // assumption.
        Vec x = Vec::Zero(g.n);
        Vec r = -b;
        Vec z = precond(r);
        Vec p = z;
        double rz = dot(r, z);
        const double tol = 1e-12 * std::max(1.0, bn);
        int nit = 0;
        bool ok = false;
        for (int it = 0; it < 400; ++it) {
            nit = it + 1;
            Vec Ap = Aop(p);
            double alpha = rz / dot(p, Ap);
            x += alpha * p;
            r -= alpha * Ap;
            if (std::sqrt(dot(r, r)) < tol) {
                ok = true;
                break;
            }
            z = precond(r);
            double rz2 = dot(r, z);
            p = z + (rz2 / rz) * p;
            rz = rz2;
        }
        if (!ok) {
            std::ostringstream os;
            os << "oep_residual: projected CG stalled for orbital " << i + 1
               << " (eps_i = " << eps_i << ", distance to continuation spectrum = " << delta
               << ")";
            throw NumericalError(os.str());
        }
        out.solve_iterations.push_back(nit);
        out.values.array() += 2.0 * phi.U.col(i).array() * project_out(phi, x).array();
    }
    return out;
}

OepResidual residual_dense(const OrbitalSet& phi, const RadialHamiltonian& H,
                           const std::vector<Vec>& rhs) {
    const RadialGrid& g = *phi.g;
    const int n = g.n;
    // Dense operator symmetrized in the plain h*r' metric (where the Numerov
    // pencil is self-adjoint up to boundary-node noise), then the full
    // sum-over-states form of the residual.
    Vec wrp = g.kind == GridKind::Log ? Vec(g.h * g.rp) : Vec(Vec::Constant(n, g.h));
    Vec ws = wrp.array().sqrt();
    Mat HL(n, n);
    Vec e = Vec::Zero(n);
    for (int c = 0; c < n; ++c) {
        e[c] = 1.0;
        HL.col(c) = H.apply(e);
        e[c] = 0.0;
    }
    Mat A = (ws.asDiagonal() * HL) * ws.cwiseInverse().asDiagonal();
    A = 0.5 * (A + A.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    Mat Ua = ws.cwiseInverse().asDiagonal() * es.eigenvectors();  // rp-orthonormal, u-rep

    OepResidual out;
    out.g = &g;
    out.values = Vec::Zero(n);
    for (int i = 0; i < phi.N; ++i) {
        Vec b = project_out(phi, rhs[i]);
        out.rhs_norms.push_back(std::sqrt((g.w.array() * b.array().square()).sum()));
        out.solve_iterations.push_back(0);
        for (int a = phi.N; a < n; ++a) {
            double me = (wrp.array() * Ua.col(a).array() * rhs[i].array()).sum();
            out.values.array() += 2.0 * phi.U.col(i).array() * Ua.col(a).array() * me /
                                  (phi.eps[i] - es.eigenvalues()[a]);
        }
    }
    return out;
}

}  // namespace

OepResidual oep_residual_rhs(const OrbitalSet& phi, const LocalPotential& W,
                             const std::vector<Vec>& rhs, OepSolver solver) {
    const RadialGrid& g = *phi.g;
    if (static_cast<int>(rhs.size()) != phi.N)
        throw ShapeError("oep_residual: need one right-hand side per orbital");
    for (const Vec& r : rhs) check_on_grid(g, r, "oep_residual rhs");
    RadialHamiltonian H(g, W.v);
    double eps_next = 0.0;
    check_gap_and_next(phi, H, eps_next);
    bool dense = solver == OepSolver::Dense || (solver == OepSolver::Auto && g.n < 256);
    OepResidual out =
        dense ? residual_dense(phi, H, rhs) : residual_iterative(phi, H, rhs, eps_next);
    out.integral = integrate(g, out.values);
    out.l2_norm = std::sqrt(integrate(g, Vec(out.values.array().square())));
    return out;
}

OepResidual oep_residual(const OrbitalSet& phi, const LocalPotential& W,
                         const LocalPotential& v_x, const ExchangeBlock& K, OepSolver solver) {
    std::vector<Vec> rhs;
    for (int i = 0; i < phi.N; ++i)
        rhs.push_back(Vec(K.apply(phi.U.col(i)) - v_x.v.array().cwiseProduct(phi.U.col(i).array()).matrix()));
    return oep_residual_rhs(phi, W, rhs, solver);
}

LocalPotential reconstruct_potential(const OrbitalSet& phi, const Vec& c) {
    const RadialGrid& g = *phi.g;
    if (c.size() != phi.N) throw ShapeError("reconstruct_potential: c has wrong length");
    if (c[0] != 0.0) throw ParameterError("reconstruct_potential: c_1 must be 0");
    if (c.minCoeff() < 0.0) throw ParameterError("reconstruct_potential: c must be >= 0");
    Vec num = Vec::Zero(g.n);
    for (int i = 0; i < phi.N; ++i) {
        Vec upp = second_derivative(g, phi.U.col(i));
        num.array() += 0.5 * phi.U.col(i).array() * upp.array();
        if (i > 0) num.array() += 0.5 * c[i] * phi.U.col(i).array().square();
    }
    const double fl = phi.floor();
    Vec W = Vec::Zero(g.n);
    for (int k = 0; k < g.n; ++k)
        if (phi.rho[k] > fl) W[k] = num[k] / phi.rho[k];
    return make_potential(g, std::move(W), "none");
}

std::vector<double> wronskian_residual(const OrbitalSet& phi) {
    const RadialGrid& g = *phi.g;
    if (phi.eps.size() != phi.N)
        throw ParameterError("wronskian_residual: orbital set carries no eigenvalues");
    std::vector<double> out;
    if (phi.N < 2) return out;
    Vec u1 = phi.U.col(0);
    Vec du1 = derivative(g, u1);
    for (int i = 1; i < phi.N; ++i) {
        Vec ui = phi.U.col(i);
        Vec dui = derivative(g, ui);
        Vec F = ui.array() * du1.array() - u1.array() * dui.array();
        Vec res = derivative(g, F).array() -
                  2.0 * (phi.eps[i] - phi.eps[0]) * u1.array() * ui.array();
        out.push_back(std::sqrt(integrate(g, Vec(res.array().square()))));
    }
    return out;
}

}  // namespace xcpot
