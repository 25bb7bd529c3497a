#pragma once

// Small assembled instances shared by the unit and acceptance tests.

#include "proxplast/assemble.hpp"
#include "support/test_rng.hpp"

namespace testsupport {

/// Horizontal bar of unit length/area/modulus, fixed at the left, one free
/// axial dof, yield stress R, axial load q. Elastic solution u = q; limit
/// load R.
inline proxplast::Model single_bar(double q = 0.3, double R = 0.5, double youngs = 1.0,
                                   double area = 1.0) {
    using namespace proxplast;
    return assemble_truss({{0.0, 0.0}, {1.0, 0.0}},
                          {{0, 1, youngs, area, YieldCriterion::truss_box(R)}},
                          {{0, 0}, {0, 1}, {1, 1}}, {{1, 0, q}});
}

/// Same bar with no yield limit (pure elastic mode).
inline proxplast::Model single_bar_elastic(double q = 0.3) {
    using namespace proxplast;
    return assemble_truss({{0.0, 0.0}, {1.0, 0.0}},
                          {{0, 1, 1.0, 1.0, YieldCriterion::elastic()}},
                          {{0, 0}, {0, 1}, {1, 1}}, {{1, 0, q}});
}

/// Two collinear bars clamped at both ends with an axial load P on the
/// shared node; statically indeterminate, so the stiffer bar yields first.
/// With E = A = 1, lengths 1 and 2, R = 0.5: first yield at P = 0.75, limit
/// load 1.0, and at P = 0.9 the exact solution is u = 0.8, eps_p1 = 0.3,
/// sigma = (0.5, -0.4).
inline proxplast::Model two_bar_chain(double P = 0.9, double R = 0.5) {
    using namespace proxplast;
    return assemble_truss(
        {{0.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}},
        {{0, 1, 1.0, 1.0, YieldCriterion::truss_box(R)}, {1, 2, 1.0, 1.0, YieldCriterion::truss_box(R)}},
        {{0, 0}, {0, 1}, {2, 0}, {2, 1}, {1, 1}}, {{1, 0, P}});
}

/// Symmetric two-bar frame: anchors at (0,0) and (2,0), apex at (1,1),
/// downward load at the apex. The solution has equal bar strains.
inline proxplast::Model symmetric_two_bar(double P = 0.3, double R = 1.0) {
    using namespace proxplast;
    return assemble_truss(
        {{0.0, 0.0}, {2.0, 0.0}, {1.0, 1.0}},
        {{0, 2, 1.0, 1.0, YieldCriterion::truss_box(R)}, {1, 2, 1.0, 1.0, YieldCriterion::truss_box(R)}},
        {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {{2, 1, -P}});
}

/// Randomized collinear two-bar instance loaded strictly between first
/// yield and the limit load, so the converged solution mixes one plastic
/// and one elastic bar. Joint dimension 1 + 12 = 13.
inline proxplast::Model random_two_bar(std::uint64_t seed) {
    using namespace proxplast;
    Rng rng(seed);
    const double L1 = rng.range(0.5, 2.0);
    const double L2 = rng.range(0.5, 2.0);
    const double A1 = rng.range(0.5, 2.0);
    const double A2 = rng.range(0.5, 2.0);
    const double E1 = rng.range(0.5, 2.0);
    const double E2 = rng.range(0.5, 2.0);
    const double R1 = rng.range(0.3, 1.0);
    const double R2 = rng.range(0.3, 1.0);
    const double k1 = E1 * A1 / L1;
    const double k2 = E2 * A2 / L2;
    // Elastic stress per unit load: sigma1 = k1 u / A1 with u = P / (k1+k2).
    const double first_yield =
        std::min(R1 * A1 * (k1 + k2) / k1, R2 * A2 * (k1 + k2) / k2);
    const double limit = R1 * A1 + R2 * A2;
    const double P = first_yield + rng.range(0.25, 0.75) * (limit - first_yield);
    const double sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
    return assemble_truss(
        {{0.0, 0.0}, {L1, 0.0}, {L1 + L2, 0.0}},
        {{0, 1, E1, A1, YieldCriterion::truss_box(R1)}, {1, 2, E2, A2, YieldCriterion::truss_box(R2)}},
        {{0, 0}, {0, 1}, {2, 0}, {2, 1}, {1, 1}}, {{1, 0, sign * P}});
}

/// One constant-strain triangle clamped along its left edge with a shear
/// load at the free corner; joint dimension 2 + 6 = 8.
inline proxplast::Model single_triangle(double px, double py, double kappa,
                                        double youngs = 1.0, double poisson = 0.3) {
    using namespace proxplast;
    return assemble_cst2d({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}},
                          {{0, 1, 2, youngs, poisson, YieldCriterion::von_mises(kappa)}}, 1.0,
                          {{0, 0}, {0, 1}, {2, 0}, {2, 1}}, {{1, 0, px}, {1, 1, py}});
}

} // namespace testsupport
