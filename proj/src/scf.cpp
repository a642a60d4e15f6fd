#include "xcpot/scf.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>

#include "xcpot/coulomb.hpp"

namespace xcpot {

void ScfConfig::validate() const {
    if (N < 1) throw ParameterError("ScfConfig: N must be >= 1");
    if (Z < N) throw ParameterError("ScfConfig: Z >= N required (bound mean-field regime)");
    if (!(theta > 0.0 && theta <= 1.0)) throw ParameterError("ScfConfig: theta must be in (0,1]");
    if (max_iter < 1) throw ParameterError("ScfConfig: max_iter must be >= 1");
    if (!(tol_density > 0.0)) throw ParameterError("ScfConfig: tol_density must be > 0");
    if (eta_schedule.empty() || eta_schedule.back() != 0.0)
        throw ParameterError("ScfConfig: eta schedule must end at 0");
    for (size_t i = 0; i < eta_schedule.size(); ++i) {
        if (eta_schedule[i] < 0.0) throw ParameterError("ScfConfig: eta must be >= 0");
        if (i > 0 && eta_schedule[i] >= eta_schedule[i - 1])
            throw ParameterError("ScfConfig: eta schedule must be strictly decreasing");
    }
}

Vec mix(const Vec& previous, const Vec& next, double theta) {
    if (previous.size() != next.size()) throw ShapeError("mix: size mismatch");
    if (!(theta > 0.0 && theta <= 1.0)) throw ParameterError("mix: theta must be in (0,1]");
    return (1.0 - theta) * previous + theta * next;
}

namespace {

LocalPotential local_exchange(const OrbitalSet& phi, const ExchangeBlock& ex, Method m,
                              double eta, KliGauge kg, ElpGauge eg) {
    switch (m) {
        case Method::Slater:
            return slater_potential(phi, eta, &ex);
        case Method::Kli:
            return kli_potential(phi, ex, kg).first;
        default:
            return elp_potential(phi, ex, eg).first;
    }
}

}  // namespace

ScfReport scf_local(const RadialGrid& g, const ScfConfig& cfg) {
    cfg.validate();
    if (cfg.method == Method::Hf) throw ParameterError("scf_local: use scf_hartree_fock");
    const int N = cfg.N;
    std::vector<double> etas =
        cfg.method == Method::Slater ? cfg.eta_schedule : std::vector<double>{0.0};

    ScfReport rep;
    bool have_phi = false;
    OrbitalSet phi;
    Vec vloc;  // mixed total local potential
    bool have_vloc = false;
    Vec eps_ext;
    double dres = 0.0;
    if (cfg.method != Method::Slater) {
        // Continuation seed: the converged Slater solution keeps all N
        // orbitals bound from the first KLI/ELP iterate (a cold hydrogenic
        // start can transiently unbind the outer orbital for ions, which
        // collapses the KLI/ELP kernel structure).
        ScfConfig seed_cfg = cfg;
        seed_cfg.method = Method::Slater;
        ScfReport seed = scf_local(g, seed_cfg);
        phi = seed.phi;
        eps_ext = seed.eps_ext;
        have_phi = true;
        vloc = seed.v_loc.v;
        have_vloc = true;
    }
    for (double eta : etas) {
        const double Zeff = cfg.method == Method::Slater ? cfg.Z + eta : cfg.Z;
        if (!have_phi) {
            RadialHamiltonian H(g, Vec(-Zeff / g.r.array()));
            EigenPairs ep = lowest_eigenpairs(H, N + 2);
            phi = make_orbitals(g, ep.phi.U.leftCols(N), ep.eps.head(N));
            eps_ext = ep.eps;
            have_phi = true;
        }
        Vec rho_old = phi.rho;
        int nit = 0;
        for (int it = 0; it < cfg.max_iter; ++it) {
            nit = it + 1;
            ExchangeBlock ex = make_exchange(phi);
            LocalPotential vx =
                local_exchange(phi, ex, cfg.method, eta, cfg.kli_gauge, cfg.elp_gauge);
            Vec vH = coulomb_potential(g, phi.rho);
            Vec vnew = vH + vx.v;
            vloc = have_vloc ? mix(vloc, vnew, cfg.theta) : vnew;
            have_vloc = true;
            RadialHamiltonian H(g, Vec(-Zeff / g.r.array() + vloc.array()));
            EigenPairs ep = lowest_eigenpairs(H, N + 2);
            phi = make_orbitals(g, ep.phi.U.leftCols(N), ep.eps.head(N));
            eps_ext = ep.eps;
            dres = integrate(g, Vec((phi.rho - rho_old).cwiseAbs()));
            rho_old = phi.rho;
            rep.history.push_back(dres);
            if (dres <= cfg.tol_density) break;
        }
        rep.iterations_per_eta.push_back(nit);
        rep.iterations += nit;
    }
    rep.converged = dres <= cfg.tol_density;
    rep.phi = phi;
    rep.eps_ext = eps_ext;
    rep.gap = eps_ext[N] - eps_ext[N - 1];
    rep.gap_warning = rep.gap < 1e-8;
    {
        ExchangeBlock ex = make_exchange(phi);
        rep.v_x = local_exchange(phi, ex, cfg.method, 0.0, cfg.kli_gauge, cfg.elp_gauge);
    }
    rep.v_loc = make_potential(g, vloc, "none");
    rep.energy = hf_energy(phi, cfg.Z);
    return rep;
}

namespace {

// Davidson iteration for the lowest m eigenpairs of the (near-)symmetric Fock
// operator F = H_loc + K in the plain h*r' metric, preconditioned by shifted
// tridiagonal solves of the local part.  Seeded with the columns of V0.
void davidson_lowest(const std::function<Vec(const Vec&)>& F, const RadialHamiltonian& Hloc,
                     int m_want, const Mat& V0, Vec& eps_out, Mat& U_out) {
    const RadialGrid& g = *Hloc.g;
    const int n = g.n;
    Vec wrp = g.kind == GridKind::Log ? Vec(g.h * g.rp) : Vec(Vec::Constant(n, g.h));
    auto dot = [&](const Vec& a, const Vec& b) { return (wrp.array() * a.array() * b.array()).sum(); };

    const int max_sub = m_want + 24;
    Mat V(n, max_sub), FV(n, max_sub);
    int m = 0;
    auto append = [&](Vec t) -> bool {
        for (int pass = 0; pass < 2; ++pass)
            for (int j = 0; j < m; ++j) t -= dot(V.col(j), t) * V.col(j);
        double nt = std::sqrt(dot(t, t));
        if (!(nt > 1e-10)) return false;
        V.col(m) = t / nt;
        FV.col(m) = F(V.col(m));
        ++m;
        return true;
    };
    for (int c = 0; c < V0.cols() && m < max_sub; ++c) append(V0.col(c));
    if (m == 0) throw NumericalError("davidson: empty starting subspace");

    Vec theta;
    Mat X, FX;
    const double tol = 1e-10;
    for (int iter = 0; iter < 400; ++iter) {
        Mat T(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j <= i; ++j)
                T(i, j) = T(j, i) = 0.5 * (dot(V.col(i), FV.col(j)) + dot(V.col(j), FV.col(i)));
        Eigen::SelfAdjointEigenSolver<Mat> es(T);
        int keep = std::min(m, m_want + 4);
        theta = es.eigenvalues().head(keep);
        X = V.leftCols(m) * es.eigenvectors().leftCols(keep);
        FX = FV.leftCols(m) * es.eigenvectors().leftCols(keep);

        bool done = m >= m_want;
        int appended = 0;
        for (int k = 0; k < m_want && k < keep; ++k) {
            Vec r = FX.col(k) - theta[k] * X.col(k);
            double rn = std::sqrt(dot(r, r));
            if (rn < tol * std::max(1.0, std::abs(theta[k]))) continue;
            done = false;
            if (m >= max_sub || appended >= 4) continue;
            Vec t;
            try {
                t = Hloc.shifted_solve(theta[k], r);
            } catch (const NumericalError&) {
                t = r;
            }
            if (append(std::move(t))) ++appended;
        }
        if (done) break;
        if (appended == 0 || m >= max_sub) {
            // Restart from the current Ritz vectors.
            int nk = static_cast<int>(X.cols());
            V.leftCols(nk) = X;
            FV.leftCols(nk) = FX;
            m = nk;
            if (appended == 0) {
                // Stagnation: accept the current Ritz approximation; the
                // outer SCF convergence test governs overall accuracy.
                break;
            }
        }
    }
    eps_out = theta.head(m_want);
    U_out = X.leftCols(m_want);
}

}  // namespace

ScfReport scf_hartree_fock(const RadialGrid& g, const ScfConfig& cfg) {
    cfg.validate();
    if (cfg.method != Method::Hf) throw ParameterError("scf_hartree_fock: method must be hf");
    const int N = cfg.N;

    ScfReport rep;
    RadialHamiltonian H0(g, Vec(-cfg.Z / g.r.array()));
    EigenPairs ep0 = lowest_eigenpairs(H0, N + 2);
    OrbitalSet phi = make_orbitals(g, ep0.phi.U.leftCols(N), ep0.eps.head(N));
    Mat seed = ep0.phi.U;
    Vec rho_mix = phi.rho;
    Vec eps_ext = ep0.eps;
    double dres = 0.0;
    for (int it = 0; it < cfg.max_iter; ++it) {
        rep.iterations = it + 1;
        ExchangeBlock ex = make_exchange(phi);
        Vec vH = coulomb_potential(g, rho_mix);
        RadialHamiltonian Hloc(g, Vec(-cfg.Z / g.r.array() + vH.array()));
        auto F = [&](const Vec& u) { return Vec(Hloc.apply(u) + ex.apply(u)); };
        Vec eps;
        Mat U;
        davidson_lowest(F, Hloc, N + 2, seed, eps, U);
        OrbitalSet phin = make_orbitals(g, U.leftCols(N), eps.head(N));
        eps_ext = eps;
        seed = U;
        dres = integrate(g, Vec((phin.rho - phi.rho).cwiseAbs()));
        rep.history.push_back(dres);
        phi = phin;
        rho_mix = mix(rho_mix, phi.rho, cfg.theta);
        if (dres <= cfg.tol_density) break;
    }
    rep.converged = dres <= cfg.tol_density;
    rep.iterations_per_eta = {rep.iterations};
    rep.phi = phi;
    rep.eps_ext = eps_ext;
    rep.gap = eps_ext[N] - eps_ext[N - 1];
    rep.gap_warning = rep.gap < 1e-8;
    rep.v_x = slater_potential(phi, 0.0);  // local average of the converged exchange
    rep.v_loc = make_potential(g, coulomb_potential(g, phi.rho), "none");
    rep.energy = hf_energy(phi, cfg.Z);
    return rep;
}

}  // namespace xcpot
