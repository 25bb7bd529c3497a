#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "proxplast/assemble.hpp"
#include "support/instances.hpp"
#include "support/test_rng.hpp"

using namespace proxplast;
using testsupport::Rng;

namespace {
// Quadrilateral patch with two triangles whose interior connectivity leaves
// free nodes, used for rigid-motion checks.
Model two_triangle_patch() {
    return assemble_cst2d({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}},
                          {{0, 1, 2, 1.0, 0.3, YieldCriterion::von_mises(1.0)},
                           {0, 2, 3, 1.0, 0.3, YieldCriterion::von_mises(1.0)}},
                          1.0, {{0, 0}, {0, 1}, {3, 0}}, {{1, 0, 0.1}, {2, 1, 0.1}});
}
} // namespace

TEST_CASE("single bar assembly") {
    const Model m = testsupport::single_bar(0.3);
    CHECK(m.num_dofs == 1);
    CHECK(m.num_points() == 1);
    CHECK(m.points[0].weight == doctest::Approx(1.0)); // area * length
    REQUIRE(m.points[0].b.size() == 1);
    CHECK(m.points[0].b[0].comp == SymTensor3::XX);
    CHECK(m.points[0].b[0].dof == 0);
    CHECK(m.points[0].b[0].coeff == doctest::Approx(1.0)); // direction cosine / length
    CHECK(m.load[0] == doctest::Approx(0.3));

    CHECK(apply_b(m, 0, {0.3})[0] == doctest::Approx(0.3));
    CHECK(frobenius_norm(apply_b(m, 0, {0.0})) == 0.0);
}

TEST_CASE("collinear bars share the middle dof with opposite signs") {
    const Model m = testsupport::two_bar_chain(0.9);
    CHECK(m.num_dofs == 1);
    REQUIRE(m.num_points() == 2);
    // Bar 1 has length 1 (node at x=1), bar 2 length 2 (node at x=3).
    CHECK(m.points[0].b[0].coeff == doctest::Approx(1.0));
    CHECK(m.points[1].b[0].coeff == doctest::Approx(-0.5));
    CHECK(m.points[0].weight == doctest::Approx(1.0));
    CHECK(m.points[1].weight == doctest::Approx(2.0));
}

TEST_CASE("assembly rejects invalid structures") {
    CHECK_THROWS_AS(assemble_truss({{0, 0}, {1, 0}}, {{0, 1, 1.0, 1.0, YieldCriterion::truss_box(1.0)}},
                                   {}, {{1, 0, 1.0}}),
                    InputError); // no supports
    CHECK_THROWS_AS(assemble_truss({{0, 0}, {0, 0}}, {{0, 1, 1.0, 1.0, YieldCriterion::truss_box(1.0)}},
                                   {{0, 0}, {0, 1}, {1, 1}}, {{1, 0, 1.0}}),
                    InputError); // zero-length bar
    CHECK_THROWS_AS(assemble_truss({{0, 0}, {1, 0}}, {{0, 1, 1.0, -1.0, YieldCriterion::truss_box(1.0)}},
                                   {{0, 0}, {0, 1}, {1, 1}}, {{1, 0, 1.0}}),
                    InputError); // negative area
    CHECK_THROWS_AS(assemble_truss({{0, 0}, {1, 0}}, {{0, 1, 1.0, 1.0, YieldCriterion::truss_box(1.0)}},
                                   {{0, 0}, {0, 1}, {1, 1}}, {{0, 0, 1.0}}),
                    InputError); // load on a supported dof
    // Transverse dof of a collinear chain carries no stiffness.
    CHECK_THROWS_AS(assemble_truss({{0, 0}, {1, 0}, {2, 0}},
                                   {{0, 1, 1.0, 1.0, YieldCriterion::truss_box(1.0)},
                                    {1, 2, 1.0, 1.0, YieldCriterion::truss_box(1.0)}},
                                   {{0, 0}, {0, 1}, {2, 0}, {2, 1}}, {{1, 0, 1.0}}),
                    InputError);
    // Degenerate and inverted triangles.
    CHECK_THROWS_AS(assemble_cst2d({{0, 0}, {1, 0}, {2, 0}},
                                   {{0, 1, 2, 1.0, 0.3, YieldCriterion::von_mises(1.0)}}, 1.0,
                                   {{0, 0}, {0, 1}, {1, 1}}, {{2, 0, 1.0}}),
                    InputError);
    CHECK_THROWS_AS(assemble_cst2d({{0, 0}, {1, 0}, {0, 1}},
                                   {{0, 2, 1, 1.0, 0.3, YieldCriterion::von_mises(1.0)}}, 1.0,
                                   {{0, 0}, {0, 1}, {1, 1}}, {{2, 0, 1.0}}),
                    InputError);
    // Plane stress is not implemented.
    CHECK_THROWS_AS(assemble_cst2d({{0, 0}, {1, 0}, {0, 1}},
                                   {{0, 1, 2, 1.0, 0.3, YieldCriterion::von_mises(1.0)}}, 1.0,
                                   {{0, 0}, {0, 1}, {2, 0}, {2, 1}}, {{1, 0, 1.0}}, false),
                    InputError);
}

TEST_CASE("uniform stretch of a unit right triangle") {
    // u_x = x on nodes (0,0), (1,0), (0,1): only the 11 strain remains.
    const Model m = assemble_cst2d({{0, 0}, {1, 0}, {0, 1}},
                                   {{0, 1, 2, 1.0, 0.3, YieldCriterion::von_mises(1.0)}}, 1.0,
                                   {{0, 0}, {0, 1}, {1, 1}}, {{1, 0, 1.0}});
    CHECK(m.num_dofs == 3); // n1 x, n2 x, n2 y
    CHECK(m.points[0].weight == doctest::Approx(0.5));
    std::vector<double> du(3, 0.0);
    du[static_cast<std::size_t>(m.node_dofs[1][0])] = 1.0; // u_x(n1) = x = 1
    du[static_cast<std::size_t>(m.node_dofs[2][0])] = 0.0; // u_x(n2) = x = 0
    const SymTensor3 eps = apply_b(m, 0, du);
    CHECK(eps[SymTensor3::XX] == doctest::Approx(1.0));
    CHECK(std::abs(eps[SymTensor3::YY]) <= 1e-15);
    CHECK(std::abs(eps[SymTensor3::XY]) <= 1e-15);
}

TEST_CASE("rigid motions of an element produce zero strain") {
    const Model m = two_triangle_patch();
    // Element 1 uses nodes 0, 2, 3 -- nodes 2 and 3 have free dofs.
    std::vector<double> du(static_cast<std::size_t>(m.num_dofs), 0.0);

    // Translation is blocked by supports on node 0, so check an element whose
    // strain only sees free nodes via the compatibility rows directly:
    // apply the same translation to every free dof of nodes 1 and 2 and
    // verify element 0 (nodes 0,1,2) feels pure stretch-free motion is not
    // available; instead verify the infinitesimal rotation kernel about the
    // fixed corner node 0.
    const double omega = 1.0;
    for (int n = 0; n < 4; ++n) {
        const double x = m.nodes[static_cast<std::size_t>(n)][0];
        const double y = m.nodes[static_cast<std::size_t>(n)][1];
        const int dx = m.node_dofs[static_cast<std::size_t>(n)][0];
        const int dy = m.node_dofs[static_cast<std::size_t>(n)][1];
        if (dx >= 0) du[static_cast<std::size_t>(dx)] = -omega * y;
        if (dy >= 0) du[static_cast<std::size_t>(dy)] = omega * x;
    }
    // Node 0 is fully fixed and (0,0) stays put under the rotation; node 3
    // has u_x = -omega * 1 which its support suppresses, so restrict the
    // check to element 0 whose nodes (0,1,2) all move consistently.
    const SymTensor3 eps = apply_b(m, 0, du);
    CHECK(frobenius_norm(eps) <= 1e-14);
}

TEST_CASE("adjoint identity") {
    Rng rng(41);
    for (const Model& m : {testsupport::two_bar_chain(0.9), two_triangle_patch()}) {
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> du(static_cast<std::size_t>(m.num_dofs));
            for (double& x : du) x = rng.unit();
            const SymTensor3 s = rng.tensor(2.0);
            for (int l = 0; l < m.num_points(); ++l) {
                const double lhs = ddot(apply_b(m, l, du), s);
                const std::vector<double> adj = apply_b_adjoint(m, l, s);
                double rhs = 0.0;
                for (std::size_t i = 0; i < du.size(); ++i) rhs += du[i] * adj[i];
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
            }
        }
    }
    CHECK_THROWS_AS(apply_b(testsupport::single_bar(), 1, {0.0}), std::out_of_range);
    CHECK_THROWS_AS(apply_b_adjoint(testsupport::single_bar(), -1, SymTensor3::zero()),
                    std::out_of_range);
}

TEST_CASE("smooth energy agrees with its gradient by central differences") {
    Rng rng(42);
    for (const Model& m : {testsupport::two_bar_chain(0.9), two_triangle_patch()}) {
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> du(static_cast<std::size_t>(m.num_dofs));
            for (double& x : du) x = rng.unit();
            std::vector<SymTensor3> eps_p(m.points.size());
            for (SymTensor3& t : eps_p) t = rng.tensor();

            std::vector<double> gdu;
            std::vector<SymTensor3> geps;
            smooth_energy_gradient(m, du, eps_p, gdu, geps);

            // Random joint direction.
            std::vector<double> hdu(du.size());
            for (double& x : hdu) x = rng.unit();
            std::vector<SymTensor3> heps(eps_p.size());
            for (SymTensor3& t : heps) t = rng.tensor();

            const double h = 1e-5;
            auto shifted = [&](double t) {
                std::vector<double> du2 = du;
                std::vector<SymTensor3> eps2 = eps_p;
                for (std::size_t i = 0; i < du2.size(); ++i) du2[i] += t * hdu[i];
                for (std::size_t l = 0; l < eps2.size(); ++l) eps2[l] += t * heps[l];
                return smooth_energy(m, du2, eps2);
            };
            const double fd = (shifted(h) - shifted(-h)) / (2.0 * h);
            double exact = 0.0;
            for (std::size_t i = 0; i < du.size(); ++i) exact += gdu[i] * hdu[i];
            for (std::size_t l = 0; l < eps_p.size(); ++l) exact += ddot(geps[l], heps[l]);
            CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
        }
    }
}

TEST_CASE("joint Hessian bound on the single bar") {
    // rho C = 1 and b = 1 give the 2x2 form [[1,-1],[-1,1]], top eigenvalue 2.
    const Model m = testsupport::single_bar();
    const double L = lipschitz_upper_bound(m);
    CHECK(L >= 2.0);
    CHECK(L <= 2.02);
    CHECK(hessian_trace_bound(m) >= L / 1.01 - 1e-9);
}

TEST_CASE("doubling every weight doubles the bound") {
    Model m = testsupport::two_bar_chain(0.9);
    const double L1 = lipschitz_upper_bound(m);
    for (IntegrationPoint& p : m.points) p.weight *= 2.0;
    finalize_model(m);
    const double L2 = lipschitz_upper_bound(m);
    CHECK(L2 == doctest::Approx(2.0 * L1).epsilon(1e-12));
}

TEST_CASE("assembled stiffness reproduces hand values") {
    // Collinear chain: K = k1 + k2 = 1 + 0.5 on the single free dof.
    {
        const Model m = testsupport::two_bar_chain(0.9);
        double K = 0.0;
        for (int l = 0; l < m.num_points(); ++l) {
            const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
            const SymTensor3 col = apply_b(m, l, {1.0});
            K += p.weight * ddot(p.elastic.apply(col), col);
        }
        CHECK(K == doctest::Approx(1.5).epsilon(1e-14));
    }
    // Symmetric frame: K = sum (EA/L) c c^T over both bars at the apex node.
    {
        const Model m = testsupport::symmetric_two_bar(0.3);
        REQUIRE(m.num_dofs == 2);
        double K[2][2] = {{0, 0}, {0, 0}};
        for (int l = 0; l < m.num_points(); ++l) {
            const IntegrationPoint& p = m.points[static_cast<std::size_t>(l)];
            for (int i = 0; i < 2; ++i) {
                std::vector<double> ei(2, 0.0);
                ei[static_cast<std::size_t>(i)] = 1.0;
                const SymTensor3 coli = apply_b(m, l, ei);
                for (int j = 0; j < 2; ++j) {
                    std::vector<double> ej(2, 0.0);
                    ej[static_cast<std::size_t>(j)] = 1.0;
                    K[i][j] += p.weight * ddot(p.elastic.apply(coli), apply_b(m, l, ej));
                }
            }
        }
        // Bars of length sqrt(2), direction cosines (±1/√2, 1/√2), EA = 1:
        // each contributes (1/√2)(c ⊗ c), summed: off-diagonals cancel.
        const double k = 1.0 / std::sqrt(2.0) * 0.5;
        CHECK(K[0][0] == doctest::Approx(2 * k).epsilon(1e-12));
        CHECK(K[1][1] == doctest::Approx(2 * k).epsilon(1e-12));
        CHECK(K[0][1] == doctest::Approx(0.0).scale(1.0));
        CHECK(K[1][0] == doctest::Approx(0.0).scale(1.0));
    }
}
