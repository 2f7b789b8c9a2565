#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>

#include "pidreg/poly.hpp"

namespace pidreg {

// Stability region: either the shifted left half-plane Re z < sigma0 or a
// circle with center m on the real axis and radius rho. Schur = circle(0,1).
struct GammaRegion {
    enum class Kind { hurwitz, circle };

    Kind kind = Kind::hurwitz;
    double sigma0 = 0.0;  // hurwitz only
    double m = 0.0;       // circle only
    double rho = 1.0;     // circle only

    static GammaRegion hurwitz(double sigma0 = 0.0) {
        GammaRegion g;
        g.kind = Kind::hurwitz;
        g.sigma0 = sigma0;
        return g;
    }
    static GammaRegion circle(double m, double rho) {
        if (!(rho > 0.0)) throw DomainError("circle region requires rho > 0");
        GammaRegion g;
        g.kind = Kind::circle;
        g.m = m;
        g.rho = rho;
        return g;
    }
    static GammaRegion schur() { return circle(0.0, 1.0); }

    bool is_hurwitz() const { return kind == Kind::hurwitz; }
    bool is_circle() const { return kind == Kind::circle; }

    // boundary point at parameter value (w for hurwitz, alpha for circles)
    cplx boundary_point(double t) const {
        if (is_hurwitz()) return {sigma0, t};
        return cplx{m, 0.0} + rho * std::polar(1.0, t);
    }

    // signed distance to the boundary, negative inside
    double signed_distance(const cplx& z) const {
        if (is_hurwitz()) return z.real() - sigma0;
        return std::abs(z - cplx{m, 0.0}) - rho;
    }

    // inward unit-normal direction at a boundary point, as a complex vector
    cplx inward_normal(const cplx& z) const {
        if (is_hurwitz()) return {-1.0, 0.0};
        const cplx d = z - cplx{m, 0.0};
        const double n = std::abs(d);
        return n > 0.0 ? -d / n : cplx{-1.0, 0.0};
    }
};

// classification of the roots of a polynomial against a region
struct RootCensus {
    int inside = 0;
    int on_boundary = 0;
    int outside = 0;
    std::vector<ClusteredRoot> roots;

    int total() const { return inside + on_boundary + outside; }
    bool all_inside(int n) const { return inside == n && on_boundary == 0 && outside == 0; }
};

inline RootCensus root_census(const RealPoly& p, const GammaRegion& region, double boundary_tol = 1e-9) {
    if (p.degree() < 1) throw DegreeError("root_census: degree must be >= 1");
    RootCensus c;
    c.roots = cluster_roots(roots(p));
    for (const auto& r : c.roots) {
        const double d = region.signed_distance(r.value);
        if (std::abs(d) <= boundary_tol)
            c.on_boundary += r.multiplicity;
        else if (d < 0.0)
            c.inside += r.multiplicity;
        else
            c.outside += r.multiplicity;
    }
    return c;
}

// The three basis polynomials of Q = delta1*r1 + delta2*r2 + delta3*r3 in the
// paper's ordering, plus the role map onto the internal (r1, r2, r3)
// parameters where r3 is always the swept scalar:
//   circles:  (r1, r2, r3) multiply (delta1, delta2, delta3) directly;
//   hurwitz:  Q = kI + kP*s' + kD*s'^2 with s' = s - sigma0, and
//             (r1, r2, r3) = (kI, kD, kP), i.e. r2 multiplies delta3 = s'^2
//             and r3 multiplies delta2 = s'.
struct QBasis {
    RealPoly delta1, delta2, delta3;
    bool hurwitz_roles = false;

    const RealPoly& r1_poly() const { return delta1; }
    const RealPoly& r2_poly() const { return hurwitz_roles ? delta3 : delta2; }
    const RealPoly& r3_poly() const { return hurwitz_roles ? delta2 : delta3; }

    RealPoly q_of(double r1, double r2, double r3) const {
        return r1 * r1_poly() + r2 * r2_poly() + r3 * r3_poly();
    }
};

inline QBasis q_basis(const GammaRegion& region) {
    QBasis b;
    if (region.is_hurwitz()) {
        const double s0 = region.sigma0;
        b.delta1 = RealPoly{1.0};
        b.delta2 = RealPoly{-s0, 1.0};
        b.delta3 = b.delta2 * b.delta2;
        b.hurwitz_roles = true;
    } else {
        b.delta1 = RealPoly{region.rho * region.rho - region.m * region.m, 0.0, 1.0};
        b.delta2 = RealPoly{-region.m, 1.0};
        b.delta3 = RealPoly{1.0};
    }
    return b;
}

// c = T*r between the plain controller coefficients c1 + c2 z + c3 z^2 and the
// r-parameters of the circle basis. Defined for circles only; continuous PID
// works in the k-parameters directly.
inline std::array<std::array<double, 3>, 3> transform_matrix(const GammaRegion& region) {
    if (!region.is_circle())
        throw NotApplicable("transform_matrix: defined for circle regions only");
    const double m = region.m, rho = region.rho;
    return {{{rho * rho - m * m, -m, 1.0}, {0.0, 1.0, 0.0}, {1.0, 0.0, 0.0}}};
}

enum class DecouplingChoice { canonical, linear, quadratic };

// E_Gamma such that Im(Q/E_Gamma) on the boundary depends on r3 alone.
// Circles: z - m (choice 'quadratic' selects delta1 instead, kept for the
// Schur cross-checks). Hurwitz: the constant 1.
inline RealPoly decoupling_function(const GammaRegion& region,
                                    DecouplingChoice choice = DecouplingChoice::canonical) {
    if (region.is_hurwitz()) {
        if (choice == DecouplingChoice::quadratic)
            throw DomainError("decoupling_function: quadratic choice is circle-only");
        return RealPoly{1.0};
    }
    if (choice == DecouplingChoice::quadratic) return q_basis(region).delta1;
    return RealPoly{-region.m, 1.0};
}

// Definition-1 rank condition, checked numerically on sampled boundary points:
// Rank d(H,G)/d(r1,r2) == 1 everywhere, which for p = A*Q + B reduces to
// |A|^2 * Im(conj(d1) * d2) == 0 with (d1, d2) the r1/r2 basis polynomials.
inline bool check_rank_condition(const GammaRegion& region, const QBasis& basis, int samples = 256) {
    if (samples < 16) throw DomainError("check_rank_condition: samples must be >= 16");
    const RealPoly& d1 = basis.r1_poly();
    const RealPoly& d2 = basis.r2_poly();
    for (int i = 0; i < samples; ++i) {
        double t;
        if (region.is_hurwitz()) {
            // spread samples over a generous symmetric frequency range
            t = -50.0 + 100.0 * (static_cast<double>(i) + 0.5) / samples;
        } else {
            t = -std::numbers::pi + 2.0 * std::numbers::pi * (static_cast<double>(i) + 0.5) / samples;
        }
        const cplx z = region.boundary_point(t);
        const cplx v1 = d1.eval(z), v2 = d2.eval(z);
        const double scale = std::abs(v1) * std::abs(v1) + std::abs(v2) * std::abs(v2);
        if (scale == 0.0) return false;  // rank 0, not 1
        const double det = std::imag(std::conj(v1) * v2);
        if (std::abs(det) > 1e-9 * scale) return false;
    }
    return true;
}

}  // namespace pidreg
