#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "xcpot/orbitals.hpp"

using namespace xcpot;

namespace {
Mat smooth_columns(const RadialGrid& g, int N) {
    Mat U(g.n, N);
    for (int i = 0; i < N; ++i)
        U.col(i) = g.r.array().pow(i + 1) * (-(0.7 + 0.4 * i) * g.r.array()).exp();
    return U;
}
}  // namespace

TEST_CASE("Loewdin orthonormalization in the quadrature metric") {
    RadialGrid g = default_grid(800);
    OrbitalSet phi = make_orbitals(g, smooth_columns(g, 3), Vec());
    CHECK(overlap_deviation(phi) < 1e-12);
    CHECK(phi.rho.minCoeff() >= 0.0);
    CHECK(integrate(g, phi.rho) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("sign convention: first significant sample positive") {
    RadialGrid g = default_grid(400);
    Mat U = smooth_columns(g, 2);
    U.col(0) *= -1.0;
    OrbitalSet phi = make_orbitals(g, U, Vec());
    for (int i = 0; i < 2; ++i) {
        double m = phi.U.col(i).cwiseAbs().maxCoeff();
        for (int k = 0; k < g.n; ++k)
            if (std::abs(phi.U(k, i)) > 1e-8 * m) {
                CHECK(phi.U(k, i) > 0.0);
                break;
            }
    }
}

TEST_CASE("shape and degeneracy errors") {
    RadialGrid g = default_grid(300);
    CHECK_THROWS_AS(make_orbitals(g, Mat(Mat::Zero(10, 2)), Vec()), ShapeError);
    CHECK_THROWS_AS(make_orbitals(g, Mat(Mat::Zero(g.n, 0)), Vec()), ParameterError);
    Mat U = smooth_columns(g, 2);
    U.col(1) = U.col(0);  // linearly dependent
    CHECK_THROWS_AS(make_orbitals(g, U, Vec()), NumericalError);
    Mat V = smooth_columns(g, 2);
    CHECK_THROWS_AS(make_orbitals(g, V, Vec(Vec::Zero(3))), ShapeError);
    Mat W = smooth_columns(g, 1);
    W(5, 0) = std::nan("");
    CHECK_THROWS_AS(make_orbitals(g, W, Vec()), NumericalError);
}

TEST_CASE("validate rejects a denormalized set") {
    RadialGrid g = default_grid(300);
    OrbitalSet phi = make_orbitals(g, smooth_columns(g, 2), Vec());
    phi.U *= std::sqrt(2.0);  // break normalization behind the constructor's back
    phi.rho = phi.U.array().square().rowwise().sum();
    CHECK_THROWS_AS(validate(phi), NumericalError);
}

TEST_CASE("density floor is far below the physical tail") {
    RadialGrid g = default_grid(500);
    OrbitalSet phi = make_orbitals(g, smooth_columns(g, 2), Vec());
    CHECK(phi.floor() == doctest::Approx(1e-45 * phi.rho.maxCoeff()));
    CHECK(phi.floor() > 0.0);
}
