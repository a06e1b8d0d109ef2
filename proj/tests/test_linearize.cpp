#include "slcp/linearize.hpp"
#include "slcp/cone.hpp"
#include "slcp/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace slcp;

TEST_CASE("spectral derivative at an isotropic point") {
    // amat = diag(1,1), A=2: G^{ij} = diag(e^{-pi}, e^{-pi})
    const OperatorParams p = OperatorParams::make(2, 0.1, 2.0);
    SymMatrix h = SymMatrix::identity(2);
    const PointGeometry g = assemble_point(VecN{}, h);
    const SymMatrix gup = lin::dG_dA(g, p);
    const double expect = std::exp(-std::numbers::pi);
    CHECK(gup(0, 0) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(gup(1, 1) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::fabs(gup(0, 1)) <= 1e-14);
}

TEST_CASE("spectral derivative is rotation equivariant") {
    const OperatorParams p = OperatorParams::make(3, 0.1, 2.0);
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const PointGeometry g = lin::random_admissible_point(p, 20.0, rng);
        const auto q = lin::random_rotation(3, rng);
        const SymMatrix rotAmat = lin::rotate(g.amat, q);
        // equivariance of the spectral formula: G(R a R^T) = R G(a) R^T
        PointGeometry gr = g;
        gr.amat = rotAmat;
        const EigenPair ep = sym_eigen(rotAmat);
        gr.kappa = ep.values;
        const SymMatrix lhs = lin::dG_dA(gr, p);
        const SymMatrix rhs = lin::rotate(lin::dG_dA(g, p), q);
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j)
                CHECK(std::fabs(lhs(i, j) - rhs(i, j)) <= 1e-10);
    }
}

TEST_CASE("matrix-direction derivative matches central differences") {
    const OperatorParams p2 = OperatorParams::make(2, 0.1, 2.0);
    const OperatorParams p3 = OperatorParams::make(3, 0.1, 2.0);
    Rng rng(9);
    for (const OperatorParams* pp : {&p2, &p3}) {
        const OperatorParams& p = *pp;
        for (int trial = 0; trial < 100; ++trial) {
            const PointGeometry g = lin::random_admissible_point(p, 30.0, rng);
            const SymMatrix gup = lin::dG_dA(g, p);
            const SymMatrix M = cone::random_unit_direction(p.n, rng);
            const double eps = 1e-5;
            SymMatrix up = g.amat, dn = g.amat;
            double analytic = 0.0;
            for (int i = 0; i < p.n; ++i)
                for (int j = 0; j < p.n; ++j) analytic += gup(i, j) * M(i, j);
            for (int i = 0; i < p.n; ++i)
                for (int j = i; j < p.n; ++j) {
                    up.add(i, j, eps * M(i, j));
                    dn.add(i, j, -eps * M(i, j));
                }
            const double fd = (cone::G_of_matrix(up, p) - cone::G_of_matrix(dn, p)) / (2 * eps);
            CHECK(std::fabs(analytic - fd) <= 1e-6 * std::max(1.0, std::fabs(analytic)));
        }
    }
}

TEST_CASE("zero gradient kills the first-order coefficients") {
    const OperatorParams p = OperatorParams::make(2, 0.1, 2.0);
    SymMatrix h(2);
    h.set(0, 0, 2.0); h.set(1, 1, 1.0); h.set(0, 1, 0.3);
    const PointGeometry g = assemble_point(VecN{}, h);
    const lin::LinearizedPoint lp = lin::linearized_coeffs(g, p);
    CHECK(lp.gTildeFirst[0] == 0.0);
    CHECK(lp.gTildeFirst[1] == 0.0);
    const SymMatrix gup = lin::dG_dA(g, p);
    for (int i = 0; i < 2; ++i)
        for (int j = i; j < 2; ++j)
            CHECK(lp.gTildeSecond(i, j) == doctest::Approx(gup(i, j)).epsilon(1e-14));
}

TEST_CASE("gradient-slot derivative matches central differences at a worked point") {
    const OperatorParams p = OperatorParams::make(2, 0.1, 2.0);
    SymMatrix h(2);
    h.set(0, 0, 2.0); h.set(1, 1, 1.0);
    const VecN grad{1.0, 0.0, 0.0, 0.0};
    const PointGeometry g = assemble_point(grad, h);
    const lin::LinearizedPoint lp = lin::linearized_coeffs(g, p);
    const double eps = 1e-5;
    for (int dir = 0; dir < 2; ++dir) {
        VecN gu = grad, gd = grad;
        gu[dir] += eps;
        gd[dir] -= eps;
        const PointGeometry a = assemble_point(gu, h);
        const PointGeometry b = assemble_point(gd, h);
        const double fd = (concave_G(a.kappa, p) - concave_G(b.kappa, p)) / (2 * eps);
        CHECK(std::fabs(lp.gTildeFirst[dir] - fd) <= 1e-6);
    }
}

TEST_CASE("hessian-trace identity at sampled points") {
    Rng rng(13);
    for (int n : {2, 3, 4}) {
        const OperatorParams p = OperatorParams::make(n, 0.1, 2.0);
        for (int trial = 0; trial < 2000; ++trial) {
            const PointGeometry g = lin::random_admissible_point(p, 1000.0, rng);
            const lin::LinearizedPoint lp = lin::linearized_coeffs(g, p);
            double lhs = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) lhs += lp.gTildeSecond(i, j) * g.hess(i, j);
            CHECK(std::fabs(lhs - lp.sumGKappa) <= 1e-10);
        }
    }
}

TEST_CASE("ellipticity and weight positivity at sampled points") {
    Rng rng(19);
    for (int n : {2, 3}) {
        const OperatorParams p = OperatorParams::make(n, 0.1, 2.0);
        for (int trial = 0; trial < 5000; ++trial) {
            const PointGeometry g = lin::random_admissible_point(p, 1000.0, rng);
            const lin::LinearizedPoint lp = lin::linearized_coeffs(g, p);
            const EigenPair ep = sym_eigen(lp.gTildeSecond);
            CHECK(ep.values[n - 1] > 0.0);
            CHECK(lp.sumG > 0.0);
        }
    }
}

TEST_CASE("fd_validate over admissible points") {
    Rng rng(29);
    const OperatorParams p = OperatorParams::make(2, 0.1, 2.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const PointGeometry g = lin::random_admissible_point(p, 50.0, rng);
        worst = std::max(worst, lin::fd_validate(g, p, 20, rng.next_u64()));
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("fd_validate on a gradient-free diagonal point is tight") {
    const OperatorParams p = OperatorParams::make(2, 0.1, 2.0);
    SymMatrix h(2);
    h.set(0, 0, 1.5); h.set(1, 1, 0.9);
    const PointGeometry g = assemble_point(VecN{}, h);
    CHECK(lin::fd_validate(g, p, 50, 31) <= 1e-7);
}

TEST_CASE("cone boundary precondition") {
    const OperatorParams p = OperatorParams::make(2, 0.1, 2.0);
    const double k = std::tan(0.05); // margin exactly 0
    SymMatrix h = SymMatrix::diag(2, {k, k, 0.0, 0.0});
    const PointGeometry g = assemble_point(VecN{}, h);
    CHECK_THROWS_AS(lin::dG_dA(g, p), ConeBoundary);
}

TEST_CASE("subsolution gap: zero for identical points, linear in the hessian gap") {
    const OperatorParams p = OperatorParams::make(2, 0.1, 2.0);
    SymMatrix h(2);
    h.set(0, 0, 2.0); h.set(1, 1, 1.5); h.set(0, 1, 0.2);
    const VecN grad{0.5, -0.3, 0.0, 0.0};
    const PointGeometry g = assemble_point(grad, h);
    CHECK(lin::subsolution_gap(g, g, p) == 0.0);

    const double eps = 0.25;
    SymMatrix hsub = h;
    hsub.add(0, 0, eps);
    hsub.add(1, 1, eps);
    const PointGeometry gsub = assemble_point(grad, hsub);
    const lin::LinearizedPoint lp = lin::linearized_coeffs(g, p);
    const double expect = eps * (lp.gTildeSecond(0, 0) + lp.gTildeSecond(1, 1));
    CHECK(lin::subsolution_gap(g, gsub, p) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(lin::subsolution_gap(g, gsub, p) > 0.0);
}
