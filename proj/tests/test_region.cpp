#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "example_plants.hpp"
#include "pidreg/region.hpp"

using namespace pidreg;
using Catch::Approx;

TEST_CASE("q_basis per region kind") {
    const auto schur = q_basis(GammaRegion::schur());
    CHECK(schur.delta1.coeffs() == std::vector<double>{1.0, 0.0, 1.0});
    CHECK(schur.delta2.coeffs() == std::vector<double>{0.0, 1.0});
    CHECK(schur.delta3.coeffs() == std::vector<double>{1.0});

    const auto c01 = q_basis(GammaRegion::circle(0.0, 1.0));
    CHECK(c01.delta1.coeffs() == schur.delta1.coeffs());
    CHECK(c01.delta2.coeffs() == schur.delta2.coeffs());

    const auto hw = q_basis(GammaRegion::hurwitz());
    CHECK(hw.delta1.coeffs() == std::vector<double>{1.0});
    CHECK(hw.delta2.coeffs() == std::vector<double>{0.0, 1.0});
    CHECK(hw.delta3.coeffs() == std::vector<double>{0.0, 0.0, 1.0});
    // role map: r3 sweeps kP (the linear basis polynomial)
    CHECK(hw.r3_poly().degree() == 1);
    CHECK(hw.r2_poly().degree() == 2);
}

TEST_CASE("transform matrix") {
    const auto t = transform_matrix(GammaRegion::schur());
    CHECK(t == std::array<std::array<double, 3>, 3>{{{1, 0, 1}, {0, 1, 0}, {1, 0, 0}}});
    CHECK(transform_matrix(GammaRegion::circle(0.0, 1.0)) == t);
    const auto t2 = transform_matrix(GammaRegion::circle(1.0, 2.0));
    CHECK(t2 == std::array<std::array<double, 3>, 3>{{{3, -1, 1}, {0, 1, 0}, {1, 0, 0}}});
    CHECK_THROWS_AS(transform_matrix(GammaRegion::hurwitz()), NotApplicable);
}

TEST_CASE("decoupling functions") {
    CHECK(decoupling_function(GammaRegion::schur(), DecouplingChoice::linear).coeffs() ==
          std::vector<double>{0.0, 1.0});
    CHECK(decoupling_function(GammaRegion::circle(2.0, 0.5)).coeffs() ==
          std::vector<double>{-2.0, 1.0});
    CHECK(decoupling_function(GammaRegion::hurwitz()).coeffs() == std::vector<double>{1.0});
    CHECK(decoupling_function(GammaRegion::schur(), DecouplingChoice::quadratic).coeffs() ==
          std::vector<double>{1.0, 0.0, 1.0});
    CHECK_THROWS_AS(decoupling_function(GammaRegion::hurwitz(), DecouplingChoice::quadratic),
                    DomainError);
}

TEST_CASE("rank condition holds for canonical bases, fails for the naive one") {
    CHECK(check_rank_condition(GammaRegion::hurwitz(), q_basis(GammaRegion::hurwitz())));
    CHECK(check_rank_condition(GammaRegion::schur(), q_basis(GammaRegion::schur())));
    std::mt19937 rng(19);
    std::uniform_real_distribution<double> mdist(-2.0, 2.0), rdist(0.2, 3.0);
    for (int i = 0; i < 5; ++i) {
        const auto reg = GammaRegion::circle(mdist(rng), rdist(rng));
        CHECK(check_rank_condition(reg, q_basis(reg)));
    }
    // naive c-parameter basis (1, z, z^2) on the Schur circle
    QBasis naive;
    naive.delta1 = RealPoly{1.0};
    naive.delta2 = RealPoly{0.0, 1.0};
    naive.delta3 = RealPoly{0.0, 0.0, 1.0};
    CHECK_FALSE(check_rank_condition(GammaRegion::schur(), naive));
    // the 2x2 Jacobian determinant is |A|^2 Im(conj(d1) d2) = |A|^2 sin(pi/4) != 0 at z=e^{j pi/4}
    const cplx z = std::polar(1.0, std::numbers::pi / 4.0);
    CHECK(std::abs(std::imag(std::conj(naive.delta1.eval(z)) * naive.delta2.eval(z))) > 0.5);
}

TEST_CASE("rank condition does not depend on the plant") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> coeff(-5.0, 5.0);
    const auto reg = GammaRegion::schur();
    const auto basis = q_basis(reg);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> a(4), b(6);
        for (auto& v : a) v = coeff(rng);
        for (auto& v : b) v = coeff(rng);
        // the check involves only the basis; plants enter nowhere
        CHECK(check_rank_condition(reg, basis) == check_rank_condition(reg, basis, 64));
    }
}

TEST_CASE("decoupled ratios are real on the boundary") {
    for (const auto& [m, rho] : std::vector<std::pair<double, double>>{{0, 1}, {1, 2}, {-0.5, 0.3}}) {
        const auto reg = GammaRegion::circle(m, rho);
        const auto basis = q_basis(reg);
        const auto E = decoupling_function(reg);
        for (int i = 0; i < 256; ++i) {
            const double a = -std::numbers::pi + 2 * std::numbers::pi * (i + 0.5) / 256.0;
            const cplx z = reg.boundary_point(a);
            const cplx v1 = basis.delta1.eval(z) / E.eval(z);
            const cplx v2 = basis.delta2.eval(z) / E.eval(z);
            CHECK(std::abs(std::imag(v1)) < 1e-9 * (1.0 + std::abs(v1)));
            CHECK(std::abs(std::imag(v2)) < 1e-9 * (1.0 + std::abs(v2)));
        }
    }
}

TEST_CASE("plant validation") {
    auto p7 = testdata::example7();
    CHECK(p7.is_retarded());
    CHECK_NOTHROW(p7.validate());
    PlantModel bad = p7;
    bad.A = RealPoly{0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0};  // deg A = 6, deg B = 7: n = m+1
    CHECK_THROWS_AS(bad.validate(), DomainError);
}
