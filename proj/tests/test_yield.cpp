#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "proxplast/yield.hpp"
#include "support/prox_oracle.hpp"
#include "support/test_rng.hpp"

using namespace proxplast;
using testsupport::Rng;

namespace {
YieldCriterion any_criterion(Rng& rng) {
    const double pick = rng.uniform();
    if (pick < 0.4) return YieldCriterion::truss_box(rng.range(0.1, 2.0));
    if (pick < 0.8) return YieldCriterion::von_mises(rng.range(0.1, 2.0));
    return YieldCriterion::elastic();
}

SymTensor3 natural_input(const YieldCriterion& c, Rng& rng, double span = 3.0) {
    // Inputs shaped like what the iteration feeds the prox.
    if (c.type() == YieldCriterion::Type::TrussBox) return SymTensor3::axial(span * rng.unit());
    return rng.tensor(span);
}
} // namespace

TEST_CASE("membership against the defining inequalities") {
    const double tol = 1e-9;
    CHECK(membership(YieldCriterion::truss_box(0.5), SymTensor3::axial(0.3), tol));
    CHECK_FALSE(membership(YieldCriterion::truss_box(0.5), SymTensor3::axial(0.5 + 2 * tol), tol));
    CHECK(membership(YieldCriterion::truss_box(0.5), SymTensor3::axial(-0.5), tol));

    // Any pure pressure is admissible for the deviatoric bound.
    const YieldCriterion vm = YieldCriterion::von_mises(0.4);
    for (double p : {-7.0, 0.0, 3.5}) CHECK(membership(vm, p * SymTensor3::identity(), tol));
    CHECK(membership(YieldCriterion::elastic(), SymTensor3::diag(1e9, -1e9, 0), 0.0));
    CHECK_THROWS_AS(membership(vm, SymTensor3::zero(), -1.0), InputError);
}

TEST_CASE("projection onto the scaled admissible set") {
    const YieldCriterion box = YieldCriterion::truss_box(1.0);
    CHECK(project_scaled(box, SymTensor3::axial(2.0), 1.0)[0] == doctest::Approx(1.0));
    CHECK(project_scaled(box, SymTensor3::axial(-3.0), 2.0)[0] == doctest::Approx(-2.0));

    const YieldCriterion vm = YieldCriterion::von_mises(1.0);
    Rng rng(21);
    SymTensor3 inside = rng.deviatoric_tensor();
    inside *= 0.5 / frobenius_norm(inside);
    const SymTensor3 kept = project_scaled(vm, inside, 1.0);
    CHECK(frobenius_norm(kept - inside) <= 1e-15);

    // Radial shrink: a deviator of norm 5 lands on the sphere of radius
    // beta * kappa = 2, direction preserved.
    SymTensor3 dev = rng.deviatoric_tensor();
    dev *= 5.0 / frobenius_norm(dev);
    const SymTensor3 proj = project_scaled(vm, dev, 2.0);
    CHECK(frobenius_norm(proj) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(frobenius_norm(proj - (2.0 / 5.0) * dev) <= 1e-12);
}

TEST_CASE("projection is the nearest feasible point (sampled certificate)") {
    Rng rng(22);
    const YieldCriterion vm = YieldCriterion::von_mises(0.7);
    for (int trial = 0; trial < 5; ++trial) {
        const SymTensor3 x = rng.tensor(4.0);
        const double beta = rng.range(0.2, 3.0);
        const SymTensor3 proj = project_scaled(vm, x, beta);
        const double best = frobenius_norm(proj - x);
        for (int i = 0; i < 2000; ++i) {
            // Sampled feasible point: any volumetric part, deviator within radius.
            SymTensor3 y = rng.deviatoric_tensor(1.0);
            const double n = frobenius_norm(y);
            if (n > 0.0) y *= rng.uniform() * beta * vm.limit() / n;
            y += rng.range(-4.0, 4.0) * SymTensor3::identity();
            CHECK(best <= frobenius_norm(y - x) + 1e-12);
        }
    }
}

TEST_CASE("dissipation values") {
    CHECK(dissipation(YieldCriterion::truss_box(2.0), SymTensor3::axial(-3.0)) == doctest::Approx(6.0));
    CHECK(dissipation(YieldCriterion::truss_box(1.0), SymTensor3::zero()) == 0.0);
    CHECK(dissipation(YieldCriterion::von_mises(1.0), SymTensor3::zero()) == 0.0);
    CHECK(dissipation(YieldCriterion::elastic(), SymTensor3::zero()) == 0.0);
    CHECK(dissipation(YieldCriterion::elastic(), SymTensor3::axial(1e-8)) == infinite_dissipation);

    // Non-deviatoric arguments are outside the domain of the deviatoric bound.
    CHECK(dissipation(YieldCriterion::von_mises(1.0), SymTensor3::identity()) == infinite_dissipation);

    Rng rng(23);
    SymTensor3 e = rng.deviatoric_tensor();
    e *= 2.0 / frobenius_norm(e);
    const double val = dissipation(YieldCriterion::von_mises(1.0), e);
    CHECK(val == doctest::Approx(2.0).epsilon(1e-12));

    // Supremum certificate: no admissible stress produces more plastic work,
    // and boundary samples get close to the supremum.
    double best = 0.0;
    for (int i = 0; i < 100000; ++i) {
        SymTensor3 s = rng.deviatoric_tensor();
        const double n = frobenius_norm(s);
        if (n > 0.0) s *= (i % 2 == 0 ? 1.0 : rng.uniform()) / n;
        s += rng.range(-2.0, 2.0) * SymTensor3::identity();
        best = std::max(best, ddot(e, s));
    }
    CHECK(best <= val + 1e-12);
    CHECK(best >= val - 5e-2);
}

TEST_CASE("dissipation is positively homogeneous (exactly)") {
    Rng rng(24);
    for (int i = 0; i < 200; ++i) {
        const YieldCriterion c = any_criterion(rng);
        const SymTensor3 e =
            c.type() == YieldCriterion::Type::VonMises ? rng.deviatoric_tensor(2.0) : natural_input(c, rng);
        const double d1 = dissipation(c, e);
        if (!std::isfinite(d1)) continue;
        CHECK(dissipation(c, 2.0 * e) == 2.0 * d1);
    }
}

TEST_CASE("soft threshold branches of the bar prox") {
    const YieldCriterion box = YieldCriterion::truss_box(1.0);
    CHECK(prox_dissipation(box, SymTensor3::axial(2.0), 1.0)[0] == doctest::Approx(1.0));
    CHECK(prox_dissipation(box, SymTensor3::axial(0.5), 1.0)[0] == 0.0);
    CHECK(prox_dissipation(box, SymTensor3::axial(-3.0), 1.0)[0] == doctest::Approx(-2.0));
    CHECK(prox_dissipation(box, SymTensor3::axial(1.0), 1.0)[0] == 0.0); // boundary maps to zero
}

TEST_CASE("prox of a pure pressure vanishes for the deviatoric bound") {
    const YieldCriterion vm = YieldCriterion::von_mises(1.0);
    for (double p : {-2.0, 0.7, 5.0}) {
        const SymTensor3 out = prox_dissipation(vm, p * SymTensor3::identity(), 1.0);
        CHECK(frobenius_norm(out) == 0.0);
    }
}

TEST_CASE("elastic criterion prox is the zero map") {
    Rng rng(25);
    for (int i = 0; i < 50; ++i)
        CHECK(frobenius_norm(prox_dissipation(YieldCriterion::elastic(), rng.tensor(5.0), 0.7)) == 0.0);
}

TEST_CASE("Moreau identity: prox + projection reassembles the argument") {
    Rng rng(26);
    for (double beta : {0.1, 1.0, 10.0}) {
        for (int i = 0; i < 350; ++i) {
            const YieldCriterion c = any_criterion(rng);
            const SymTensor3 x = rng.tensor(4.0);
            const SymTensor3 sum = prox_dissipation(c, x, beta) + project_scaled(c, x, beta);
            CHECK(frobenius_norm(sum - x) <= 1e-12 * (1.0 + frobenius_norm(x)));
        }
    }
}

TEST_CASE("prox output satisfies the subgradient optimality conditions") {
    Rng rng(27);
    for (int i = 0; i < 100; ++i) {
        const YieldCriterion c = any_criterion(rng);
        const SymTensor3 x = natural_input(c, rng);
        const double beta = rng.range(0.1, 5.0);
        const SymTensor3 zeta = prox_dissipation(c, x, beta);

        // x - zeta lies in beta * Y ...
        const SymTensor3 g = (1.0 / beta) * (x - zeta);
        CHECK(membership(c, g, 1e-10));

        // ... and is a subgradient of the dissipation at zeta.
        const double d_zeta = dissipation(c, zeta);
        REQUIRE(std::isfinite(d_zeta));
        for (int probe = 0; probe < 1000; ++probe) {
            const SymTensor3 e = c.type() == YieldCriterion::Type::VonMises
                                     ? rng.deviatoric_tensor(4.0)
                                     : natural_input(c, rng, 4.0);
            const double lhs = dissipation(c, e);
            if (!std::isfinite(lhs)) continue;
            CHECK(lhs >= d_zeta + ddot(g, e - zeta) - 1e-9 * (1.0 + std::abs(lhs)));
        }
    }
}

TEST_CASE("prox is firmly nonexpansive") {
    Rng rng(28);
    for (int i = 0; i < 300; ++i) {
        const YieldCriterion c = any_criterion(rng);
        const SymTensor3 x = rng.tensor(3.0);
        const SymTensor3 y = rng.tensor(3.0);
        const double beta = rng.range(0.1, 4.0);
        const SymTensor3 d = prox_dissipation(c, x, beta) - prox_dissipation(c, y, beta);
        CHECK(frobenius_norm(d) <= frobenius_norm(x - y) + 1e-14);
        // The stronger firm inequality ||d||^2 <= d : (x - y).
        CHECK(ddot(d, d) <= ddot(d, x - y) + 1e-12);
    }
}

TEST_CASE("prox agrees with the derivative-free minimization oracle") {
    Rng rng(29);
    const YieldCriterion box = YieldCriterion::truss_box(0.8);
    for (int i = 0; i < 25; ++i) {
        const SymTensor3 x = SymTensor3::axial(rng.range(-4.0, 4.0));
        const double beta = rng.range(0.2, 2.5);
        const SymTensor3 got = prox_dissipation(box, x, beta);
        const SymTensor3 want = testsupport::prox_oracle(box, x, beta);
        CHECK(frobenius_norm(got - want) <= 1e-6);
    }
    const YieldCriterion vm = YieldCriterion::von_mises(0.6);
    for (int i = 0; i < 25; ++i) {
        const SymTensor3 x = rng.tensor(2.5);
        const double beta = rng.range(0.2, 2.5);
        const SymTensor3 got = prox_dissipation(vm, x, beta);
        const SymTensor3 want = testsupport::prox_oracle(vm, x, beta);
        CHECK(frobenius_norm(got - want) <= 1e-6);
    }
}

TEST_CASE("prox is total and single-valued on extreme inputs") {
    Rng rng(30);
    for (const YieldCriterion& c :
         {YieldCriterion::truss_box(0.5), YieldCriterion::von_mises(0.5), YieldCriterion::elastic()}) {
        for (double span : {1e-12, 1.0, 1e100}) {
            const SymTensor3 x = rng.tensor(span);
            const SymTensor3 a = prox_dissipation(c, x, 1.0);
            const SymTensor3 b = prox_dissipation(c, x, 1.0);
            for (int k = 0; k < 6; ++k) {
                CHECK(std::isfinite(a[k]));
                CHECK(a[k] == b[k]);
            }
        }
    }
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(YieldCriterion::truss_box(0.0), InputError);
    CHECK_THROWS_AS(YieldCriterion::von_mises(-0.5), InputError);
    CHECK_THROWS_AS(project_scaled(YieldCriterion::truss_box(1.0), SymTensor3::zero(), 0.0), InputError);
    CHECK_THROWS_AS(prox_dissipation(YieldCriterion::truss_box(1.0), SymTensor3::zero(), -1.0), InputError);
}
