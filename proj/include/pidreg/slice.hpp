#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include "pidreg/geometry.hpp"
#include "pidreg/plant.hpp"

namespace pidreg {

// Boundary point of the region where closed-loop eigenvalues can cross as
// (r1, r2) vary with r3 fixed. Conjugates stored once with param >= 0
// (param is w for hurwitz lines, alpha in [0, pi] for circles).
struct SingularFrequency {
    double param = 0.0;
    cplx location;
    bool is_real_axis = false;
};

// Straight line h1*r1 + h2*r2 + h0 = 0 in the (r1, r2)-plane along which an
// eigenvalue (pair) sits exactly on the region boundary.
struct BoundaryLine {
    double h1 = 0.0, h2 = 0.0, h0 = 0.0;
    SingularFrequency source;
    int e1 = 0, e2 = 0;        // transition signs, inward-normal convention
    int crossing_size = 1;      // 1 for real-axis frequencies, 2 for conjugate pairs
    int delta_inside_pos = 0;   // inside-count change crossing toward h1*r1+h2*r2+h0 > 0
    bool from_infinity = false; // synthetic boundary where the leading coefficient vanishes
    bool transitions_valid = true;

    double ell(double r1, double r2) const { return h1 * r1 + h2 * r2 + h0; }
    void normalize() {
        const double n = std::hypot(h1, h2);
        if (n > 0) { h1 /= n; h2 /= n; h0 /= n; }
    }
};

// one cell of the line arrangement inside the bounding box
struct Face {
    Polygon poly;
    Pt rep{0.0, 0.0};
    std::vector<int> signs;  // per geometric line, sign of ell at rep
    int inside = -1;         // propagated count of roots inside the region
    int rhp = -1;            // propagated RHP count (delay slices)
    bool touches_box = false;
    bool candidate = false;
    bool stable = false;
    RootCensus census;       // filled when the face was verified directly
    bool verified = false;
};

// geometric line of the arrangement; coincident boundary lines get merged here
struct GeoLine {
    double a = 0.0, b = 0.0, c = 0.0;  // a*r1 + b*r2 + c = 0, (a,b) unit
    std::vector<int> members;          // indices into Slice::lines
    int delta_pos = 0;                 // summed inside-count change toward + side
    bool transitions_valid = true;
};

struct Slice {
    double r3 = 0.0;
    std::vector<SingularFrequency> frequencies;
    std::vector<BoundaryLine> lines;
    std::vector<GeoLine> geo_lines;
    std::vector<Face> faces;
    std::vector<Diagnostic> diagnostics;
    std::array<double, 4> box{0, 0, 0, 0};  // xmin, xmax, ymin, ymax
    int degree = 0;                         // closed-loop degree N (polynomial slices)

    std::vector<const Face*> stable_faces() const {
        std::vector<const Face*> out;
        for (const auto& f : faces)
            if (f.stable) out.push_back(&f);
        return out;
    }
    size_t stable_count() const { return stable_faces().size(); }
};

struct SliceOptions {
    double boundary_tol = 1e-9;
    bool verify_all_faces = false;      // verify every face census, not just candidates
    DecouplingChoice decoupling = DecouplingChoice::canonical;
    std::optional<std::array<double, 4>> box;  // override the automatic bounding box
};

namespace detail {

using CPoly = std::vector<cplx>;  // ascending, complex coefficients

inline CPoly cpoly_mul(const CPoly& a, const CPoly& b) {
    CPoly out(a.size() + b.size() - 1, cplx{0.0, 0.0});
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// U real polynomial, z = m + rho*e^{j*alpha}, t = tan(alpha/2):
// U(z) = hat(U)(t) / (1+t^2)^d with hat a complex-coefficient polynomial.
inline CPoly hat_on_circle(const RealPoly& u, double m, double rho) {
    const int d = std::max(u.degree(), 0);
    const CPoly nz = {cplx{m + rho, 0.0}, cplx{0.0, 2.0 * rho}, cplx{m - rho, 0.0}};
    const CPoly one_t2 = {cplx{1.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}};
    std::vector<CPoly> pw(static_cast<size_t>(d) + 1);
    pw[0] = {cplx{1.0, 0.0}};
    for (int k = 1; k <= d; ++k) pw[static_cast<size_t>(k)] = cpoly_mul(pw[static_cast<size_t>(k - 1)], one_t2);
    CPoly out(static_cast<size_t>(2 * d) + 1, cplx{0.0, 0.0});
    CPoly nzk = {cplx{1.0, 0.0}};
    for (int k = 0; k <= d; ++k) {
        const double c = u.coeff(k);
        if (c != 0.0) {
            const CPoly term = cpoly_mul(nzk, pw[static_cast<size_t>(d - k)]);
            for (size_t i = 0; i < term.size(); ++i) out[i] += c * term[i];
        }
        if (k < d) nzk = cpoly_mul(nzk, nz);
    }
    return out;
}

inline RealPoly imag_part(const CPoly& p) {
    std::vector<double> c(p.size());
    for (size_t i = 0; i < p.size(); ++i) c[i] = p[i].imag();
    return RealPoly(std::move(c));
}

// real roots of p, Newton-polished, deduplicated
inline std::vector<double> real_roots(const RealPoly& p, double imag_tol = 1e-7) {
    std::vector<double> out;
    if (p.degree() < 1) return out;
    const RealPoly dp = p.derivative();
    for (const cplx& r : roots(p)) {
        if (std::abs(r.imag()) > imag_tol * (1.0 + std::abs(r))) continue;
        double x = r.real();
        for (int it = 0; it < 3; ++it) {
            const double f = p.eval(x), df = dp.eval(x);
            if (std::abs(df) < 1e-300) break;
            const double step = f / df;
            if (!std::isfinite(step) || std::abs(step) > 0.1 * (1.0 + std::abs(x))) break;
            x -= step;
        }
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline void push_diag(std::vector<Diagnostic>* sink, DiagnosticKind kind, const std::string& msg) {
    if (sink) sink->push_back({kind, msg});
}

// relative scale of U near the boundary, for vanishing tests
inline double eval_scale(const RealPoly& u, const cplx& z) {
    return u.max_abs_coeff() * std::pow(std::max(1.0, std::abs(z)), std::max(0, u.degree()));
}

}  // namespace detail

// The singular-frequency polynomial: the imaginary part of
// F = p / (A * E_Gamma) on the boundary, cleared of denominators.
// Hurwitz (shifted by sigma0): S(w) = r3 * w * |A|^2 + Im(B * conj(A));
// circles: Im(hat(r3*A + B) * conj(hat(A * E))) in t = tan(alpha/2).
inline RealPoly singular_frequency_poly(const PlantModel& plant, const GammaRegion& region,
                                        double r3, DecouplingChoice dec = DecouplingChoice::canonical) {
    if (region.is_hurwitz()) {
        const RealPoly As = plant.A.shifted(region.sigma0);
        const RealPoly Bs = plant.B.shifted(region.sigma0);
        auto [RA, IA] = axis_parts(As);
        auto [RB, IB] = axis_parts(Bs);
        const RealPoly mod2 = RA * RA + IA * IA;
        return r3 * (RealPoly::x() * mod2) + (IB * RA - RB * IA);
    }
    const RealPoly E = decoupling_function(region, dec);
    const RealPoly p0 = r3 * plant.A + plant.B;  // r1, r2 parts are Im-free on the boundary
    const auto ph = detail::hat_on_circle(p0, region.m, region.rho);
    auto aeh = detail::hat_on_circle(plant.A * E, region.m, region.rho);
    for (auto& v : aeh) v = std::conj(v);
    return detail::imag_part(detail::cpoly_mul(ph, aeh));
}

// All singular frequencies of the slice (conjugate pairs once, param >= 0),
// including the real-axis points when A*E_Gamma does not vanish there.
inline std::vector<SingularFrequency> singular_frequencies(const PlantModel& plant,
                                                           const GammaRegion& region, double r3,
                                                           std::vector<Diagnostic>* diags = nullptr,
                                                           DecouplingChoice dec = DecouplingChoice::canonical) {
    std::vector<SingularFrequency> out;
    const RealPoly S = singular_frequency_poly(plant, region, r3, dec);
    if (S.is_zero())
        throw DegenerateSlice("singular-frequency equation vanished identically");
    const RealPoly AE = plant.A * decoupling_function(region, dec);

    auto ae_vanishes = [&](const cplx& z) {
        return std::abs(AE.eval(z)) <= 1e-9 * detail::eval_scale(AE, z);
    };

    if (region.is_hurwitz()) {
        const cplx z0 = region.boundary_point(0.0);
        if (!ae_vanishes(z0)) {
            out.push_back({0.0, z0, true});
        } else {
            detail::push_diag(diags, DiagnosticKind::singular_cancellation,
                              "A*E vanishes at the real-axis boundary point w=0");
        }
        for (double w : detail::real_roots(S)) {
            if (w <= 1e-9) continue;
            const cplx z = region.boundary_point(w);
            if (ae_vanishes(z)) {
                detail::push_diag(diags, DiagnosticKind::singular_cancellation,
                                  "A*E root on the boundary coincides with a singular frequency");
                continue;
            }
            out.push_back({w, z, false});
        }
    } else {
        for (double apar : {0.0, std::numbers::pi}) {
            const cplx z0 = region.boundary_point(apar);
            if (!ae_vanishes(z0)) {
                out.push_back({apar, z0, true});
            } else {
                std::ostringstream msg;
                msg << "A*E vanishes at the real-axis boundary point z=" << z0.real();
                detail::push_diag(diags, DiagnosticKind::singular_cancellation, msg.str());
            }
        }
        for (double t : detail::real_roots(S)) {
            if (t <= 1e-9) continue;  // t<0 are conjugates, t=0 is alpha=0
            const double a = 2.0 * std::atan(t);
            if (a >= std::numbers::pi - 1e-12) continue;
            const cplx z = region.boundary_point(a);
            if (ae_vanishes(z)) {
                detail::push_diag(diags, DiagnosticKind::singular_cancellation,
                                  "A*E root on the boundary coincides with a singular frequency");
                continue;
            }
            out.push_back({a, z, false});
        }
        std::sort(out.begin(), out.end(),
                  [](const SingularFrequency& x, const SingularFrequency& y) { return x.param < y.param; });
    }
    return out;
}

// Line coefficients from the real part of F at the frequency:
//   h1 = Re(d1/E), h2 = Re(d2/E), h0 = r3*Re(d3/E) + Re(B/(E*A)),
// which for hurwitz reduces to kI - w^2 kD + Re(B/A) = 0.
inline BoundaryLine boundary_line(const PlantModel& plant, const GammaRegion& region, double r3,
                                  const SingularFrequency& f,
                                  DecouplingChoice dec = DecouplingChoice::canonical) {
    const QBasis basis = q_basis(region);
    const RealPoly E = decoupling_function(region, dec);
    const cplx z = f.location;
    const cplx Ev = E.eval(z);
    const cplx Av = plant.A.eval(z);
    if (std::abs(Av * Ev) <= 1e-12 * detail::eval_scale(plant.A * E, z))
        throw PoleOnAxis("boundary_line: A*E vanishes at the frequency");
    BoundaryLine bl;
    bl.source = f;
    bl.crossing_size = f.is_real_axis ? 1 : 2;
    bl.h1 = std::real(basis.r1_poly().eval(z) / Ev);
    bl.h2 = std::real(basis.r2_poly().eval(z) / Ev);
    bl.h0 = r3 * std::real(basis.r3_poly().eval(z) / Ev) + std::real(plant.B.eval(z) / (Ev * Av));
    bl.normalize();
    return bl;
}

struct TransitionSigns {
    int e1 = 0, e2 = 0;
    double et1 = 0.0, et2 = 0.0;  // Re(mu_i^* N_in), unnormalized
    int delta_inside_pos = 0;     // inside-count change crossing toward ell > 0
};

// Transition signs from the eigenvalue velocity mu_i = -(dp/dr_i)/(dp/dz) at
// the frequency, projected on the inward boundary normal. Positive e_i means
// increasing r_i across the line moves the eigenvalue (pair) into the region.
// For hurwitz this reproduces sign e_I = -sign(dkP/dw) at nonzero frequencies.
inline TransitionSigns transition_signs(const PlantModel& plant, const GammaRegion& region,
                                        double r3, const SingularFrequency& f,
                                        DecouplingChoice dec = DecouplingChoice::canonical) {
    const QBasis basis = q_basis(region);
    const BoundaryLine bl = boundary_line(plant, region, r3, f, dec);
    // evaluate dp/dz at the foot of the perpendicular from the origin
    const double nn = bl.h1 * bl.h1 + bl.h2 * bl.h2;
    const double r1f = -bl.h0 * bl.h1 / nn;
    const double r2f = -bl.h0 * bl.h2 / nn;
    const RealPoly p = closed_loop(plant, basis, r1f, r2f, r3);
    const cplx z = f.location;
    const cplx pz = p.derivative().eval(z);
    const double scale = detail::eval_scale(p.derivative(), z);
    if (std::abs(pz) <= 1e-9 * scale)
        throw DegenerateEigenvalue("dp/dz = 0 at the singular frequency");
    const cplx Av = plant.A.eval(z);
    const cplx n_in = region.inward_normal(z);
    const cplx mu1 = -(Av * basis.r1_poly().eval(z)) / pz;
    const cplx mu2 = -(Av * basis.r2_poly().eval(z)) / pz;
    TransitionSigns ts;
    ts.et1 = std::real(std::conj(mu1) * n_in);
    ts.et2 = std::real(std::conj(mu2) * n_in);
    ts.e1 = ts.et1 >= 0 ? 1 : -1;
    ts.e2 = ts.et2 >= 0 ? 1 : -1;
    const double proj = ts.et1 * bl.h1 + ts.et2 * bl.h2;
    ts.delta_inside_pos = (proj >= 0 ? 1 : -1) * bl.crossing_size;
    return ts;
}

// Horizontal boundary where the closed-loop leading coefficient vanishes
// (hurwitz, deg A + 2 >= deg B): one real root passes through infinity and
// re-enters on the other side of the axis.
inline std::optional<BoundaryLine> degree_drop_line(const PlantModel& plant,
                                                    const GammaRegion& region) {
    if (!region.is_hurwitz()) return std::nullopt;  // roots through infinity stay outside circles
    const int m = plant.A.degree(), n = plant.B.degree();
    if (m + 2 < n) return std::nullopt;
    const double r2_star = (m + 2 == n) ? -plant.B.leading() / plant.A.leading() : 0.0;
    BoundaryLine bl;
    bl.h1 = 0.0;
    bl.h2 = 1.0;
    bl.h0 = -r2_star;
    bl.crossing_size = 1;
    bl.from_infinity = true;
    bl.source.param = std::numeric_limits<double>::infinity();
    bl.source.location = {0.0, 0.0};
    bl.source.is_real_axis = true;
    return bl;  // crossing delta depends on r3; see finalize_degree_drop_delta
}

inline void finalize_degree_drop_delta(BoundaryLine& bl, const PlantModel& plant, double r3) {
    const int m = plant.A.degree();
    const int N = m + 2;
    const double am = plant.A.leading();
    const double r2_star = -bl.h0;
    double cN1 = plant.B.coeff(N - 1) + am * r3;
    if (m >= 1) cN1 += plant.A.coeff(m - 1) * r2_star;
    if (std::abs(cN1) <= 1e-12 * (1.0 + std::abs(am * r3))) {
        bl.transitions_valid = false;  // doubly degenerate; resolved empirically by the caller
        return;
    }
    bl.delta_inside_pos = (cN1 / am > 0) ? 1 : -1;
    bl.e2 = bl.delta_inside_pos;
    bl.e1 = 0;
}

namespace detail {

inline std::array<double, 4> auto_box(const std::vector<BoundaryLine>& lines) {
    double scale = 1.0;
    for (const auto& l : lines) {
        if (std::abs(l.h1) > 1e-12) scale = std::max(scale, std::abs(l.h0 / l.h1));
        if (std::abs(l.h2) > 1e-12) scale = std::max(scale, std::abs(l.h0 / l.h2));
    }
    double lo = -10.0 * scale, hi = 10.0 * scale;
    for (int round = 0; round < 60; ++round) {
        bool ok = true;
        const double margin = 1e-6 * (hi - lo);
        for (size_t i = 0; i < lines.size() && ok; ++i) {
            for (size_t j = i + 1; j < lines.size() && ok; ++j) {
                const auto& u = lines[i];
                const auto& v = lines[j];
                const double det = u.h1 * v.h2 - u.h2 * v.h1;
                if (std::abs(det) < 1e-12) continue;
                const double x = (-u.h0 * v.h2 + v.h0 * u.h2) / det;
                const double y = (-u.h1 * v.h0 + u.h0 * v.h1) / det;
                if (x < lo + margin || x > hi - margin || y < lo + margin || y > hi - margin) ok = false;
            }
        }
        if (ok) break;
        lo *= 2.0;
        hi *= 2.0;
    }
    return {lo, hi, lo, hi};
}

// split every face by every geometric line; convex cells with area above the
// sliver threshold survive
inline std::vector<Face> build_faces(const std::vector<GeoLine>& glines,
                                     const std::array<double, 4>& box) {
    const double w = box[1] - box[0], h = box[3] - box[2];
    const double eps = 1e-12 * std::max(w, h);
    const double min_area = 1e-13 * w * h;
    std::vector<Polygon> cells;
    cells.push_back({{box[0], box[2]}, {box[1], box[2]}, {box[1], box[3]}, {box[0], box[3]}});
    for (const auto& g : glines) {
        std::vector<Polygon> next;
        for (const auto& cell : cells) {
            auto [neg, pos] = split_polygon(cell, g.a, g.b, g.c, eps);
            for (auto* part : {&neg, &pos}) {
                Polygon q = dedup_polygon(*part, eps);
                if (q.size() >= 3 && std::abs(polygon_area(q)) > min_area) {
                    make_ccw(q);
                    next.push_back(std::move(q));
                }
            }
        }
        cells = std::move(next);
    }
    std::vector<Face> faces;
    faces.reserve(cells.size());
    for (auto& c : cells) {
        Face f;
        f.rep = polygon_centroid(c);
        // nudge the representative toward the deepest inscribed point when the
        // centroid sits too close to an edge
        double min_d = std::numeric_limits<double>::max();
        for (const auto& g : glines) min_d = std::min(min_d, std::abs(g.a * f.rep[0] + g.b * f.rep[1] + g.c));
        if (min_d < 1e-6 * std::max(w, h)) {
            const double per = [&] {
                double s = 0;
                for (size_t i = 0; i < c.size(); ++i) {
                    const Pt& u = c[i];
                    const Pt& v = c[(i + 1) % c.size()];
                    s += std::hypot(v[0] - u[0], v[1] - u[1]);
                }
                return s;
            }();
            const double delta = std::abs(polygon_area(c)) / std::max(per, 1e-300);
            Polygon shrunk = c;
            for (size_t i = 0; i < c.size() && shrunk.size() >= 3; ++i) {
                const Pt& u = c[i];
                const Pt& v = c[(i + 1) % c.size()];
                double a = -(v[1] - u[1]), b = v[0] - u[0];
                const double nn = std::hypot(a, b);
                if (nn < 1e-300) continue;
                a /= nn; b /= nn;  // inward normal of a CCW polygon edge
                const double cc = -(a * u[0] + b * u[1]) - delta * 0.5;
                shrunk = clip_halfplane(shrunk, -a, -b, -cc);
            }
            if (shrunk.size() >= 3) f.rep = polygon_centroid(shrunk);
        }
        f.signs.reserve(glines.size());
        for (const auto& g : glines)
            f.signs.push_back(g.a * f.rep[0] + g.b * f.rep[1] + g.c >= 0 ? 1 : -1);
        for (const Pt& p : c) {
            if (std::abs(p[0] - box[0]) < 10 * eps || std::abs(p[0] - box[1]) < 10 * eps ||
                std::abs(p[1] - box[2]) < 10 * eps || std::abs(p[1] - box[3]) < 10 * eps) {
                f.touches_box = true;
                break;
            }
        }
        f.poly = std::move(c);
        faces.push_back(std::move(f));
    }
    return faces;
}

inline std::vector<GeoLine> merge_lines(const std::vector<BoundaryLine>& lines,
                                        std::vector<Diagnostic>* diags) {
    std::vector<GeoLine> out;
    for (size_t i = 0; i < lines.size(); ++i) {
        const auto& l = lines[i];
        const double scale = std::max(1.0, std::abs(l.h0));
        bool merged = false;
        for (auto& g : out) {
            const double cross = l.h1 * g.b - l.h2 * g.a;
            if (std::abs(cross) > 1e-9) continue;
            const double dot = l.h1 * g.a + l.h2 * g.b;  // +-1 for unit normals
            const double off = dot > 0 ? l.h0 - g.c : l.h0 + g.c;
            if (std::abs(off) > 1e-9 * scale) continue;
            g.members.push_back(static_cast<int>(i));
            g.delta_pos += (dot > 0 ? l.delta_inside_pos : -l.delta_inside_pos);
            g.transitions_valid = g.transitions_valid && l.transitions_valid;
            push_diag(diags, DiagnosticKind::merged_lines, "coincident boundary lines merged");
            merged = true;
            break;
        }
        if (!merged) {
            GeoLine g;
            g.a = l.h1;
            g.b = l.h2;
            g.c = l.h0;
            g.members = {static_cast<int>(i)};
            g.delta_pos = l.delta_inside_pos;
            g.transitions_valid = l.transitions_valid;
            out.push_back(std::move(g));
        }
    }
    return out;
}

}  // namespace detail

// faces of the subdivision of the box by the given lines
inline std::vector<Face> arrangement_faces(const std::vector<BoundaryLine>& lines,
                                           std::array<double, 4> box) {
    const auto glines = detail::merge_lines(lines, nullptr);
    return detail::build_faces(glines, box);
}

// census of p = A*Q + B at one parameter point
inline RootCensus verify_point(const PlantModel& plant, const GammaRegion& region, double r1,
                               double r2, double r3, double boundary_tol = 1e-9) {
    return root_census(closed_loop(plant, q_basis(region), r1, r2, r3), region, boundary_tol);
}

// Full P2 solution for one slice: frequencies, lines with transitions, face
// arrangement, reference census, propagation and verification of candidates.
inline Slice compute_slice(const PlantModel& plant, const GammaRegion& region, double r3,
                           const SliceOptions& opt = {}) {
    Slice sl;
    sl.r3 = r3;
    sl.degree = plant.closed_loop_degree();
    const QBasis basis = q_basis(region);

    sl.frequencies = singular_frequencies(plant, region, r3, &sl.diagnostics, opt.decoupling);
    for (const auto& f : sl.frequencies) {
        BoundaryLine bl = boundary_line(plant, region, r3, f, opt.decoupling);
        try {
            const TransitionSigns ts = transition_signs(plant, region, r3, f, opt.decoupling);
            bl.e1 = ts.e1;
            bl.e2 = ts.e2;
            bl.delta_inside_pos = ts.delta_inside_pos;
        } catch (const Error& e) {
            bl.transitions_valid = false;
            sl.diagnostics.push_back({DiagnosticKind::degenerate_eigenvalue, e.what()});
        }
        sl.lines.push_back(std::move(bl));
    }
    if (auto dd = degree_drop_line(plant, region)) {
        finalize_degree_drop_delta(*dd, plant, r3);
        sl.diagnostics.push_back({DiagnosticKind::degree_drop,
                                  "closed-loop leading coefficient vanishes on r2 = " +
                                      std::to_string(-dd->h0)});
        sl.lines.push_back(std::move(*dd));
    }

    sl.geo_lines = detail::merge_lines(sl.lines, &sl.diagnostics);
    sl.box = opt.box ? *opt.box : detail::auto_box(sl.lines);
    sl.faces = detail::build_faces(sl.geo_lines, sl.box);
    if (sl.faces.empty()) return sl;

    for (auto& f : sl.faces)
        if (f.touches_box) sl.diagnostics.push_back({DiagnosticKind::truncated_face, ""});

    // reference face: representative farthest from every line
    size_t ref = 0;
    double best = -1.0;
    for (size_t i = 0; i < sl.faces.size(); ++i) {
        double d = std::numeric_limits<double>::max();
        for (const auto& g : sl.geo_lines)
            d = std::min(d, std::abs(g.a * sl.faces[i].rep[0] + g.b * sl.faces[i].rep[1] + g.c));
        if (sl.geo_lines.empty()) d = 1.0;
        if (d > best) { best = d; ref = i; }
    }
    Face& rf = sl.faces[ref];
    rf.census = verify_point(plant, region, rf.rep[0], rf.rep[1], r3, opt.boundary_tol);
    rf.inside = rf.census.inside;
    rf.verified = true;

    bool transitions_ok = true;
    for (const auto& g : sl.geo_lines) transitions_ok = transitions_ok && g.transitions_valid;

    for (auto& f : sl.faces) {
        if (&f == &rf) continue;
        if (!transitions_ok) { f.inside = -1; continue; }
        int inside = rf.inside;
        for (size_t k = 0; k < sl.geo_lines.size(); ++k)
            inside += sl.geo_lines[k].delta_pos * (f.signs[k] - rf.signs[k]) / 2;
        f.inside = inside;
    }

    for (auto& f : sl.faces) {
        f.candidate = (f.inside == sl.degree);
        if (f.candidate || opt.verify_all_faces) {
            if (!f.verified) {
                f.census = verify_point(plant, region, f.rep[0], f.rep[1], r3, opt.boundary_tol);
                f.verified = true;
            }
            if (f.candidate && f.census.inside != f.inside) {
                std::ostringstream msg;
                msg << "census propagation mismatch at r3=" << r3 << " rep=(" << f.rep[0] << ","
                    << f.rep[1] << "): propagated " << f.inside << ", verified " << f.census.inside;
                throw ConsistencyError(msg.str());
            }
            f.stable = f.candidate && f.census.all_inside(sl.degree);
        }
    }
    return sl;
}

}  // namespace pidreg
