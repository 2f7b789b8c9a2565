#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "example_plants.hpp"
#include "pidreg/poly.hpp"
#include "pidreg/region.hpp"

using namespace pidreg;
using Catch::Approx;

TEST_CASE("normalization strips noisy trailing coefficients") {
    RealPoly p{1.0, 2.0, 1e-15};
    CHECK(p.degree() == 1);
    CHECK(RealPoly{}.is_zero());
    CHECK(RealPoly{0.0, 0.0}.is_zero());
    CHECK(RealPoly{5.0}.degree() == 0);
}

TEST_CASE("complex evaluation") {
    const RealPoly p{1.0, 0.0, 1.0};  // x^2 + 1
    CHECK(std::abs(p.eval(cplx{0.0, 1.0})) < 1e-15);
    const RealPoly one{1.0};
    CHECK(one.eval(cplx{3.0, 4.0}) == cplx{1.0, 0.0});

    // Im F at the first nonzero Example-2 singular frequency for kP = -2
    const auto ex2 = testdata::example2();
    const cplx s{0.0, 0.3530};
    const cplx F_im_part = ex2.B.eval(s) / ex2.A.eval(s);
    const double imF = -2.0 * 0.3530 + std::imag(F_im_part);
    CHECK(std::abs(imF) < 5e-3);  // 0.3530 is the paper's 4-digit rounding
}

TEST_CASE("roots: basics and right-half-plane counts") {
    const auto r = roots(RealPoly{-1.0, 0.0, 1.0});
    REQUIRE(r.size() == 2);
    CHECK(r[0].real() == Approx(-1.0).margin(1e-12));
    CHECK(r[1].real() == Approx(1.0).margin(1e-12));
    CHECK_THROWS_AS(roots(RealPoly{3.0}), DegreeError);

    auto rhp = [](const RealPoly& p) {
        int n = 0;
        for (const auto& z : roots(p))
            if (z.real() > 0) ++n;
        return n;
    };
    CHECK(rhp(testdata::example3().A) == 2);
    CHECK(rhp(testdata::example2().A) == 1);
}

TEST_CASE("roots satisfy the residual contract") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> coeff(-10.0, 10.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> c(static_cast<size_t>(2 + rng() % 7));
        for (auto& v : c) v = coeff(rng);
        RealPoly p(std::move(c));
        if (p.degree() < 1) continue;
        for (const auto& r : roots(p)) {
            const double bound =
                1e-8 * p.max_abs_coeff() * std::pow(std::max(1.0, std::abs(r)), p.degree());
            CHECK(std::abs(p.eval(r)) <= bound);
        }
    }
}

TEST_CASE("roots are closed under conjugation") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coeff(-10.0, 10.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<double> c(static_cast<size_t>(3 + rng() % 5));
        for (auto& v : c) v = coeff(rng);
        RealPoly p(std::move(c));
        if (p.degree() < 1) continue;
        const auto rs = roots(p);
        for (const auto& r : rs) {
            double best = 1e300;
            for (const auto& q : rs) best = std::min(best, std::abs(q - std::conj(r)));
            CHECK(best <= 1e-8 * (1.0 + std::abs(r)));
        }
    }
}

TEST_CASE("roots of a product are the union of factor roots") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> coeff(-10.0, 10.0);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<double> ca(static_cast<size_t>(2 + rng() % 6)), cb(static_cast<size_t>(2 + rng() % 6));
        for (auto& v : ca) v = coeff(rng);
        for (auto& v : cb) v = coeff(rng);
        RealPoly a(std::move(ca)), b(std::move(cb));
        if (a.degree() < 1 || b.degree() < 1) continue;
        auto ra = roots(a);
        auto rb = roots(b);
        ra.insert(ra.end(), rb.begin(), rb.end());
        auto rab = roots(a * b);
        REQUIRE(rab.size() == ra.size());
        for (const auto& r : ra) {
            double best = 1e300;
            for (const auto& q : rab) best = std::min(best, std::abs(q - r));
            CHECK(best <= 1e-6 * (1.0 + std::abs(r)));
        }
    }
}

TEST_CASE("root census against regions") {
    const RealPoly p = RealPoly{-0.5, 1.0} * RealPoly{2.0, 1.0};  // (z-0.5)(z+2)
    const auto c = root_census(p, GammaRegion::schur());
    CHECK(c.inside == 1);
    CHECK(c.outside == 1);
    CHECK(c.on_boundary == 0);

    // Example 1: A has three Schur-stable zeros, one exactly at z=-1, one outside
    const auto c1 = root_census(testdata::example1().A, GammaRegion::schur(), 1e-9);
    CHECK(c1.inside == 3);
    CHECK(c1.on_boundary == 1);
    CHECK(c1.outside == 1);

    // Example 5: A*z has the z-factor and one plant zero inside, z=-1 on the circle
    const auto p5 = testdata::example5().A * RealPoly::x();
    const auto c5 = root_census(p5, GammaRegion::schur(), 1e-9);
    CHECK(c5.inside == 2);
    CHECK(c5.on_boundary == 1);
    CHECK(c5.outside == 1);

    CHECK_THROWS_AS(root_census(RealPoly{1.0}, GammaRegion::schur()), DegreeError);
}

TEST_CASE("census partition always sums to the degree") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> coeff(-5.0, 5.0);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<double> c(static_cast<size_t>(2 + rng() % 7));
        for (auto& v : c) v = coeff(rng);
        RealPoly p(std::move(c));
        if (p.degree() < 1) continue;
        for (const auto& reg : {GammaRegion::hurwitz(), GammaRegion::schur(), GammaRegion::circle(1.0, 2.0)}) {
            CHECK(root_census(p, reg).total() == p.degree());
        }
    }
}

TEST_CASE("multiplicity clustering") {
    const RealPoly p = RealPoly{1.0, 1.0} * RealPoly{1.0, 1.0} * RealPoly{-2.0, 1.0};
    const auto cl = cluster_roots(roots(p));
    int mult_at_minus1 = 0;
    for (const auto& c : cl)
        if (std::abs(c.value - cplx{-1.0, 0.0}) < 1e-4) mult_at_minus1 = c.multiplicity;
    CHECK(mult_at_minus1 == 2);
}
