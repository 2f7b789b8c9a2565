#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

namespace pidreg {

using Pt = std::array<double, 2>;
using Polygon = std::vector<Pt>;  // convex, CCW

inline double polygon_area(const Polygon& p) {
    double a = 0.0;
    const size_t n = p.size();
    for (size_t i = 0; i < n; ++i) {
        const Pt& u = p[i];
        const Pt& v = p[(i + 1) % n];
        a += u[0] * v[1] - v[0] * u[1];
    }
    return 0.5 * a;
}

inline Pt polygon_centroid(const Polygon& p) {
    // area-weighted centroid; falls back to the vertex mean for slivers
    double a = 0.0, cx = 0.0, cy = 0.0;
    const size_t n = p.size();
    for (size_t i = 0; i < n; ++i) {
        const Pt& u = p[i];
        const Pt& v = p[(i + 1) % n];
        const double w = u[0] * v[1] - v[0] * u[1];
        a += w;
        cx += (u[0] + v[0]) * w;
        cy += (u[1] + v[1]) * w;
    }
    if (std::abs(a) < 1e-300) {
        Pt m{0.0, 0.0};
        for (const Pt& q : p) { m[0] += q[0]; m[1] += q[1]; }
        m[0] /= static_cast<double>(n);
        m[1] /= static_cast<double>(n);
        return m;
    }
    return {cx / (3.0 * a), cy / (3.0 * a)};
}

inline bool polygon_is_convex(const Polygon& p, double tol = 1e-9) {
    const size_t n = p.size();
    if (n < 3) return false;
    double scale = 0.0;
    for (const Pt& q : p) scale = std::max({scale, std::abs(q[0]), std::abs(q[1])});
    int sign = 0;
    for (size_t i = 0; i < n; ++i) {
        const Pt& a = p[i];
        const Pt& b = p[(i + 1) % n];
        const Pt& c = p[(i + 2) % n];
        const double cr = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0]);
        if (std::abs(cr) <= tol * scale * scale) continue;
        const int s = cr > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (s != sign) return false;
    }
    return true;
}

inline void make_ccw(Polygon& p) {
    if (polygon_area(p) < 0.0) std::reverse(p.begin(), p.end());
}

// split a convex polygon by the line a*x + b*y + c = 0 into the negative-side
// and positive-side parts; vertices within eps of the line go to both parts
inline std::pair<Polygon, Polygon> split_polygon(const Polygon& poly, double a, double b, double c,
                                                 double eps) {
    Polygon neg, pos;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Pt& p = poly[i];
        const Pt& q = poly[(i + 1) % n];
        const double dp = a * p[0] + b * p[1] + c;
        const double dq = a * q[0] + b * q[1] + c;
        const bool p_on = std::abs(dp) <= eps;
        if (p_on || dp < 0) neg.push_back(p);
        if (p_on || dp > 0) pos.push_back(p);
        if (!p_on && std::abs(dq) > eps && (dp < 0) != (dq < 0)) {
            const double t = dp / (dp - dq);
            Pt x{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
            neg.push_back(x);
            pos.push_back(x);
        }
    }
    return {neg, pos};
}

// Sutherland-Hodgman clip of a convex polygon against the half plane
// a*x + b*y + c <= 0
inline Polygon clip_halfplane(const Polygon& poly, double a, double b, double c) {
    Polygon out;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
        const Pt& p = poly[i];
        const Pt& q = poly[(i + 1) % n];
        const double dp = a * p[0] + b * p[1] + c;
        const double dq = a * q[0] + b * q[1] + c;
        if (dp <= 0) out.push_back(p);
        if ((dp < 0) != (dq < 0) && dp != dq) {
            const double t = dp / (dp - dq);
            out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
        }
    }
    return out;
}

// intersection of two convex polygons
inline Polygon clip_convex(const Polygon& subject, const Polygon& clipper) {
    Polygon out = subject;
    const size_t n = clipper.size();
    for (size_t i = 0; i < n && !out.empty(); ++i) {
        const Pt& p = clipper[i];
        const Pt& q = clipper[(i + 1) % n];
        // inward side of edge p->q for a CCW polygon: left of the edge
        const double a = -(q[1] - p[1]);
        const double b = q[0] - p[0];
        const double c = -(a * p[0] + b * p[1]);
        out = clip_halfplane(out, -a, -b, -c);  // keep left side: a*x+b*y+c >= 0
    }
    return out;
}

inline double point_line_distance(const Pt& p, double a, double b, double c) {
    return std::abs(a * p[0] + b * p[1] + c) / std::hypot(a, b);
}

// drop consecutive duplicate vertices
inline Polygon dedup_polygon(const Polygon& p, double eps) {
    Polygon out;
    for (const Pt& q : p) {
        if (out.empty() || std::hypot(q[0] - out.back()[0], q[1] - out.back()[1]) > eps)
            out.push_back(q);
    }
    while (out.size() > 1 &&
           std::hypot(out.front()[0] - out.back()[0], out.front()[1] - out.back()[1]) <= eps)
        out.pop_back();
    return out;
}

}  // namespace pidreg
