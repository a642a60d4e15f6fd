#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xcpot/coulomb.hpp"
#include "xcpot/oep.hpp"
#include "xcpot/scf.hpp"

namespace {

using namespace xcpot;

// Shortest round-trip decimal representation (std::to_chars).
std::string fmt(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// JSON scalar: non-finite values become null (JSON has no nan/inf).
std::string jnum(double x) { return std::isfinite(x) ? fmt(x) : "null"; }

std::string jarr(const std::vector<double>& v) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << jnum(v[i]);
    os << "]";
    return os.str();
}

std::string jarr(const Vec& v) {
    return jarr(std::vector<double>(v.data(), v.data() + v.size()));
}

std::string jarr(const std::vector<int>& v) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << "]";
    return os.str();
}

struct RunSpec {
    ScfConfig cfg;
    int grid_n = 2000;
    double rmax = 50.0;
    std::string method = "slater";
    std::string gauge = "default";
    std::string out_dir = ".";
    bool diagnostics = false;
    unsigned seed = 0;
};

void write_file(const std::filesystem::path& p, const std::string& body) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + p.string());
    f << body;
}

int run(const RunSpec& spec) {
    RadialGrid g = build_grid(spec.grid_n, spec.rmax, GridKind::Log);
    ScfReport rep = spec.cfg.method == Method::Hf ? scf_hartree_fock(g, spec.cfg)
                                                  : scf_local(g, spec.cfg);
    std::filesystem::create_directories(spec.out_dir);
    const OrbitalSet& phi = rep.phi;
    Vec v_nuc = -spec.cfg.Z / g.r.array();
    Vec v_H = coulomb_potential(g, phi.rho);

    // summary.json
    std::ostringstream js;
    js << "{\n";
    js << "  \"Z\": " << jnum(spec.cfg.Z) << ",\n";
    js << "  \"N\": " << spec.cfg.N << ",\n";
    js << "  \"method\": \"" << spec.method << "\",\n";
    js << "  \"gauge\": \"" << rep.v_x.gauge << "\",\n";
    js << "  \"seed\": " << spec.seed << ",\n";
    js << "  \"grid\": {\"n\": " << g.n << ", \"r_max\": " << jnum(g.r_max)
       << ", \"kind\": \"log\", \"r1\": " << jnum(g.r1) << "},\n";
    js << "  \"mixing\": " << jnum(spec.cfg.theta) << ",\n";
    js << "  \"tol_density\": " << jnum(spec.cfg.tol_density) << ",\n";
    js << "  \"eta_schedule\": " << jarr(spec.cfg.eta_schedule) << ",\n";
    js << "  \"converged\": " << (rep.converged ? "true" : "false") << ",\n";
    js << "  \"iterations\": " << rep.iterations << ",\n";
    js << "  \"iterations_per_eta\": " << jarr(rep.iterations_per_eta) << ",\n";
    js << "  \"eigenvalues\": " << jarr(phi.eps) << ",\n";
    js << "  \"eigenvalues_extended\": " << jarr(rep.eps_ext) << ",\n";
    js << "  \"gap\": " << jnum(rep.gap) << ",\n";
    js << "  \"gap_warning\": " << (rep.gap_warning ? "true" : "false") << ",\n";
    js << "  \"energy\": {\"kinetic\": " << jnum(rep.energy.kinetic)
       << ", \"nuclear\": " << jnum(rep.energy.nuclear)
       << ", \"hartree\": " << jnum(rep.energy.hartree)
       << ", \"exchange\": " << jnum(rep.energy.exchange)
       << ", \"total\": " << jnum(rep.energy.total) << "},\n";
    js << "  \"c_tail\": " << jnum(rep.v_x.c_tail) << ",\n";
    js << "  \"density_residual_history\": " << jarr(rep.history) << "\n";
    js << "}\n";
    write_file(std::filesystem::path(spec.out_dir) / "summary.json", js.str());

    // potential.csv
    std::ostringstream pc;
    pc << "r,v_nuc,v_H,v_x,r_v_x\n";
    for (int k = 0; k < g.n; ++k)
        pc << fmt(g.r[k]) << "," << fmt(v_nuc[k]) << "," << fmt(v_H[k]) << ","
           << fmt(rep.v_x.v[k]) << "," << fmt(g.r[k] * rep.v_x.v[k]) << "\n";
    write_file(std::filesystem::path(spec.out_dir) / "potential.csv", pc.str());

    // orbitals.csv
    std::ostringstream oc;
    oc << "r";
    for (int i = 0; i < phi.N; ++i) oc << ",u_" << i + 1;
    oc << "\n";
    for (int k = 0; k < g.n; ++k) {
        oc << fmt(g.r[k]);
        for (int i = 0; i < phi.N; ++i) oc << "," << fmt(phi.U(k, i));
        oc << "\n";
    }
    write_file(std::filesystem::path(spec.out_dir) / "orbitals.csv", oc.str());

    if (spec.diagnostics) {
        std::ostringstream dj;
        dj << "{\n";
        BoundReport b = bound_checks(phi, spec.cfg.Z);
        dj << "  \"bounds\": {\"nuclear_margin\": " << jnum(b.nuclear_margin)
           << ", \"exchange_margin\": " << jnum(b.exchange_margin)
           << ", \"hartree_margin\": " << jnum(b.hartree_margin)
           << ", \"ok\": " << (b.ok ? "true" : "false") << "},\n";
        std::vector<double> wr = wronskian_residual(phi);
        dj << "  \"wronskian_residuals\": " << jarr(wr) << ",\n";
        if (spec.cfg.method != Method::Hf && rep.converged) {
            LocalPotential W =
                make_potential(g, Vec(v_nuc.array() + rep.v_loc.v.array()), "none");
            ExchangeBlock ex = make_exchange(phi);
            OepResidual rr = oep_residual(phi, W, rep.v_x, ex);
            dj << "  \"oep_residual\": {\"l2_norm\": " << jnum(rr.l2_norm)
               << ", \"integral\": " << jnum(rr.integral)
               << ", \"solve_iterations\": " << jarr(rr.solve_iterations)
               << ", \"rhs_norms\": " << jarr(rr.rhs_norms) << "}\n";
        } else {
            dj << "  \"oep_residual\": null\n";
        }
        dj << "}\n";
        write_file(std::filesystem::path(spec.out_dir) / "diagnostics.json", dj.str());
    }
    return rep.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Radial atomic exchange-potential toolkit: spin-polarized Hartree-Fock and "
                 "Slater/KLI/ELP local-potential self-consistent solves with diagnostics"};
    RunSpec spec;
    double Z = 1.0;
    int N = 1;
    std::string eta_str;
    app.set_config("--config", "", "Flat key=value config file (# comments); flags override");
    app.add_option("--Z", Z, "Nuclear charge (Z >= N)")->capture_default_str();
    app.add_option("--N", N, "Electron count")->capture_default_str();
    app.add_option("--method", spec.method, "SCF method")
        ->check(CLI::IsMember({"hf", "slater", "kli", "elp"}))
        ->capture_default_str();
    app.add_option("--grid-n", spec.grid_n, "Grid size")
        ->envname("XCPOT_GRID_N")
        ->capture_default_str();
    app.add_option("--rmax", spec.rmax, "Domain cutoff (bohr)")->capture_default_str();
    app.add_option("--mix", spec.cfg.theta, "Potential mixing parameter in (0,1]")
        ->capture_default_str();
    app.add_option("--tol", spec.cfg.tol_density, "L1 density convergence tolerance")
        ->capture_default_str();
    app.add_option("--max-iter", spec.cfg.max_iter, "Iteration cap per eta stage")
        ->capture_default_str();
    app.add_option("--eta-schedule", eta_str,
                   "Comma list of decreasing Slater regularization parameters ending at 0");
    app.add_option("--gauge", spec.gauge, "Gauge convention for KLI (homo|raw) / ELP (trace|raw)")
        ->check(CLI::IsMember({"default", "homo", "trace", "raw"}))
        ->capture_default_str();
    app.add_option("--out", spec.out_dir, "Output directory")->capture_default_str();
    app.add_flag("--diagnostics", spec.diagnostics,
                 "Also write diagnostics.json (OEP residual, Wronskians, bounds)");
    app.add_option("--seed", spec.seed, "Harness seed recorded in the summary")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        spec.cfg.Z = Z;
        spec.cfg.N = N;
        if (spec.method == "hf") spec.cfg.method = Method::Hf;
        else if (spec.method == "slater") spec.cfg.method = Method::Slater;
        else if (spec.method == "kli") spec.cfg.method = Method::Kli;
        else spec.cfg.method = Method::Elp;
        if (spec.gauge == "homo" && spec.cfg.method != Method::Kli)
            throw ParameterError("--gauge homo applies to method kli only");
        if (spec.gauge == "trace" && spec.cfg.method != Method::Elp)
            throw ParameterError("--gauge trace applies to method elp only");
        if (spec.gauge == "raw") {
            spec.cfg.kli_gauge = KliGauge::Raw;
            spec.cfg.elp_gauge = ElpGauge::Raw;
        }
        if (!eta_str.empty()) {
            spec.cfg.eta_schedule.clear();
            std::stringstream ss(eta_str);
            std::string tok;
            while (std::getline(ss, tok, ','))
                spec.cfg.eta_schedule.push_back(std::stod(tok));
        }
        spec.cfg.validate();
        return run(spec);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
