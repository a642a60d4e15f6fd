#include "xcpot/orbitals.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <sstream>

namespace xcpot {

OrbitalSet make_orbitals(const RadialGrid& g, Mat U, Vec eps) {
    if (U.rows() != g.n) throw ShapeError("make_orbitals: orbital length != grid size");
    const int N = static_cast<int>(U.cols());
    if (N < 1) throw ParameterError("make_orbitals: need at least one orbital");
    if (eps.size() != 0 && eps.size() != N)
        throw ShapeError("make_orbitals: eigenvalue count != orbital count");
    if (!U.allFinite()) throw NumericalError("make_orbitals: non-finite orbital values");

    // Loewdin orthonormalization in the quadrature metric: U <- U O^{-1/2}.
    Mat O(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = (g.w.array() * U.col(i).array() * U.col(j).array()).sum();
            O(i, j) = O(j, i) = s;
        }
    Eigen::SelfAdjointEigenSolver<Mat> es(O);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw NumericalError("make_orbitals: linearly dependent orbitals");
    Mat Ohalf = es.eigenvectors() *
                es.eigenvalues().array().rsqrt().matrix().asDiagonal() *
                es.eigenvectors().transpose();
    U = U * Ohalf;

    // Sign fix: first sample exceeding 1e-8 of the column max is made positive.
    for (int i = 0; i < N; ++i) {
        double m = U.col(i).cwiseAbs().maxCoeff();
        for (int k = 0; k < g.n; ++k) {
            if (std::abs(U(k, i)) > 1e-8 * m) {
                if (U(k, i) < 0.0) U.col(i) *= -1.0;
                break;
            }
        }
    }

    OrbitalSet phi;
    phi.g = &g;
    phi.N = N;
    phi.U = std::move(U);
    phi.eps = std::move(eps);
    phi.rho = phi.U.array().square().rowwise().sum();
    validate(phi);
    return phi;
}

double overlap_deviation(const OrbitalSet& phi) {
    const RadialGrid& g = *phi.g;
    double dev = 0.0;
    for (int i = 0; i < phi.N; ++i)
        for (int j = 0; j <= i; ++j) {
            double s = (g.w.array() * phi.U.col(i).array() * phi.U.col(j).array()).sum();
            dev = std::max(dev, std::abs(s - (i == j ? 1.0 : 0.0)));
        }
    return dev;
}

void validate(const OrbitalSet& phi) {
    if (!phi.g) throw ParameterError("OrbitalSet: missing grid");
    double dev = overlap_deviation(phi);
    if (dev > 1e-8) {
        std::ostringstream os;
        os << "OrbitalSet: overlap deviates from identity by " << dev;
        throw NumericalError(os.str());
    }
    if (phi.rho.minCoeff() < 0.0) throw NumericalError("OrbitalSet: negative density");
    double total = integrate(*phi.g, phi.rho);
    if (std::abs(total - phi.N) > 1e-8 * phi.N)
        throw NumericalError("OrbitalSet: density does not integrate to N");
}

}  // namespace xcpot
