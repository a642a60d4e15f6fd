#pragma once

#include <Eigen/Dense>

#include "xcpot/errors.hpp"

namespace xcpot {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class GridKind { Uniform, Log };

// Radial grid on (0, r_max] with quadrature weights for \int_0^{r_max} f(r) dr.
//
// The "log" grid is the shifted-exponential family r_k = A (e^{k h} - 1),
// k = 1..n, with A chosen so that r_1 = r1 and r_n = r_max.  Its key property
// is that the implicit boundary node k = 0 sits exactly at r = 0, so the
// Dirichlet condition u(0) = 0 of the u-representation is honored without a
// wall at r_1.  In the uniform variant r_k = k h with trapezoid weights and an
// implicit f(0) = 0 node.
//
// Quadrature on the log grid is trapezoid-in-t with third-order Gregory end
// corrections (end weights 3/8, 7/6, 23/24), the value at the virtual node
// t = 0 being linearly extrapolated; all resulting weights are positive.
//
// kink[k] = (h^2/12) (r'_k / r_k)^2 on the log grid is the Euler-Maclaurin
// correction for the derivative jump of the max-kernel integrand at r' = r_k;
// it is consumed by the Coulomb routines.
struct RadialGrid {
    GridKind kind = GridKind::Log;
    int n = 0;
    double r_max = 0.0;
    double r1 = 0.0;   // first node (log grid only)
    double h = 0.0;    // uniform step in the transformed coordinate t (or in r)
    double A = 0.0;    // scale of the shifted-exponential map (log grid only)
    Vec r;             // nodes, strictly increasing, r(0) > 0
    Vec rp;            // dr/dt at the nodes (== 1 for the uniform grid)
    Vec w;             // quadrature weights, all > 0
    Vec kink;          // diagonal max-kernel correction (see above)

    // Grids are compared structurally; two grids built with the same
    // parameters are interchangeable.
    bool same_as(const RadialGrid& o) const {
        return kind == o.kind && n == o.n && r_max == o.r_max && r1 == o.r1;
    }
};

RadialGrid build_grid(int n, double r_max, GridKind kind, double r1 = 1e-5);

// Default grid used by the CLI and the acceptance suite.
RadialGrid default_grid(int n = 2000);

void check_on_grid(const RadialGrid& g, const Vec& f, const char* what);

double integrate(const RadialGrid& g, const Vec& f);

// du/dr from fourth-order finite differences in the transformed coordinate,
// using the exact u = 0 value at the virtual origin node.
Vec derivative(const RadialGrid& g, const Vec& u);

// d2u/dr2; fourth-order in the interior, second-order at the two nodes next
// to each boundary.
Vec second_derivative(const RadialGrid& g, const Vec& u);

}  // namespace xcpot
