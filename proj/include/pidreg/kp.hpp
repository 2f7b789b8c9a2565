#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "pidreg/slice.hpp"

namespace pidreg {

// E(n): n for even n, n-1 for odd n ("nearest smaller even number", with
// E(even) = even as forced by the Example-2 arithmetic)
inline int even_floor(int n) {
    if (n < 0) throw DomainError("even_floor: argument must be >= 0");
    return n - (n % 2);
}

struct KpPlotSample {
    double param;  // w or alpha
    double r3;
};

struct KpBranch {
    std::vector<KpPlotSample> samples;
};

struct KpExtremum {
    double param;
    double r3;
    bool is_max;
};

struct KpPlot {
    std::vector<KpBranch> branches;
    std::vector<KpExtremum> extrema;
    std::vector<double> endpoint_values;  // finite r3 limits at branch endpoints
};

namespace detail {

// r3(t) on the boundary: the level-set function of the singular-frequency
// equation. Hurwitz: kP(w) = -Im(B/A)(jw)/w; circles: rho*Im(B/(E A))/sin(a).
class KpCurve {
  public:
    KpCurve(const PlantModel& plant, const GammaRegion& region,
            DecouplingChoice dec = DecouplingChoice::canonical)
        : region_(region) {
        if (region.is_hurwitz()) {
            A_ = plant.A.shifted(region.sigma0);
            B_ = plant.B.shifted(region.sigma0);
            den_ = A_;
        } else {
            A_ = plant.A;
            B_ = plant.B;
            den_ = plant.A * decoupling_function(region, dec);
        }
    }

    // NaN at poles of the expression
    double operator()(double t) const {
        if (region_.is_hurwitz()) {
            const cplx a = A_.eval(cplx{0.0, t});
            if (std::abs(a) <= 1e-12 * eval_scale(A_, cplx{0.0, t})) return std::numeric_limits<double>::quiet_NaN();
            return -std::imag(B_.eval(cplx{0.0, t}) / a) / t;
        }
        const cplx z = region_.boundary_point(t);
        const cplx d = den_.eval(z);
        const double s = std::sin(t);
        if (std::abs(d) <= 1e-12 * eval_scale(den_, z) || std::abs(s) < 1e-300)
            return std::numeric_limits<double>::quiet_NaN();
        return region_.rho * std::imag(B_.eval(z) / d) / s;
    }

    // finite limit at the parameter-zero endpoint, if any
    std::optional<double> limit_at_zero() const {
        if (region_.is_hurwitz()) {
            if (std::abs(A_.eval(0.0)) < 1e-14 * std::max(1.0, A_.max_abs_coeff())) return std::nullopt;
            const double a = A_.eval(0.0), b = B_.eval(0.0);
            const double ap = A_.derivative().eval(0.0), bp = B_.derivative().eval(0.0);
            return -(bp * a - b * ap) / (a * a);
        }
        return endpoint_limit(region_.m + region_.rho);
    }

    // circles: finite limit at alpha = pi; hurwitz: limit as w -> infinity
    std::optional<double> limit_at_far_end() const {
        if (region_.is_hurwitz()) {
            const int n = B_.degree(), m = A_.degree();
            if (n == m + 1) return -B_.leading() / A_.leading();
            if (n <= m) return 0.0;
            return std::nullopt;
        }
        return endpoint_limit(region_.m - region_.rho);
    }

  private:
    std::optional<double> endpoint_limit(double z0) const {
        const double d = den_.eval(z0);
        if (std::abs(d) < 1e-12 * std::max(1.0, den_.max_abs_coeff())) return std::nullopt;
        const RealPoly g_num = B_;
        // r3(endpoint) = rho^2 * (B/(E A))'(z0)
        const double gp = (g_num.derivative().eval(z0) * d - g_num.eval(z0) * den_.derivative().eval(z0)) / (d * d);
        return region_.rho * region_.rho * gp;
    }

    GammaRegion region_;
    RealPoly A_, B_, den_;
};

// golden-section refinement of a bracketed extremum
template <typename F>
double golden_refine(F&& f, double a, double b, bool maximize, double tol = 1e-8) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    auto val = [&](double x) {
        const double v = f(x);
        return maximize ? -v : v;
    };
    double fc = val(c), fd = val(d);
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - gr * (b - a);
            fc = val(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + gr * (b - a);
            fd = val(d);
        }
    }
    return 0.5 * (a + b);
}

inline double default_param_max(const PlantModel& plant, const GammaRegion& region) {
    if (!region.is_hurwitz()) return std::numbers::pi;
    double r = 1.0;
    for (const RealPoly* p : {&plant.A, &plant.B}) {
        if (p->degree() < 1) continue;
        // Cauchy bound on root magnitudes
        double m = 0.0;
        for (int k = 0; k < p->degree(); ++k) m = std::max(m, std::abs(p->coeff(k) / p->leading()));
        r = std::max(r, 1.0 + m);
    }
    return 10.0 * r;
}

}  // namespace detail

// The kP-plot: r3 against the boundary parameter, split into continuous
// branches at poles, with refined extrema.
inline KpPlot kp_plot(const PlantModel& plant, const GammaRegion& region,
                      std::pair<double, double> param_range, int samples = 4096,
                      DecouplingChoice dec = DecouplingChoice::canonical) {
    if (samples < 16) throw DomainError("kp_plot: samples must be >= 16");
    detail::KpCurve curve(plant, region, dec);
    KpPlot plot;
    const double lo = std::max(param_range.first, 1e-9);
    const double hi = region.is_hurwitz() ? param_range.second
                                          : std::min(param_range.second, std::numbers::pi - 1e-9);
    KpBranch cur;
    std::vector<double> params(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i)
        params[static_cast<size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
    std::vector<double> vals(params.size());
    for (size_t i = 0; i < params.size(); ++i) vals[i] = curve(params[i]);

    for (size_t i = 0; i < params.size(); ++i) {
        if (std::isnan(vals[i])) {
            if (cur.samples.size() >= 2) plot.branches.push_back(std::move(cur));
            cur = {};
            continue;
        }
        cur.samples.push_back({params[i], vals[i]});
    }
    if (cur.samples.size() >= 2) plot.branches.push_back(std::move(cur));

    for (size_t i = 1; i + 1 < params.size(); ++i) {
        if (std::isnan(vals[i - 1]) || std::isnan(vals[i]) || std::isnan(vals[i + 1])) continue;
        const double d1 = vals[i] - vals[i - 1], d2 = vals[i + 1] - vals[i];
        if (d1 * d2 < 0.0) {
            const bool is_max = d1 > 0.0;
            const double p = detail::golden_refine(curve, params[i - 1], params[i + 1], is_max);
            plot.extrema.push_back({p, curve(p), is_max});
        }
    }
    if (auto v = curve.limit_at_zero()) plot.endpoint_values.push_back(*v);
    if (auto v = curve.limit_at_far_end()) plot.endpoint_values.push_back(*v);
    return plot;
}

inline KpPlot kp_plot(const PlantModel& plant, const GammaRegion& region, int samples = 4096) {
    return kp_plot(plant, region, {0.0, detail::default_param_max(plant, region)}, samples);
}

// number of interior (nonzero / non-real-axis) singular frequencies for this r3
inline int count_singular_frequencies(const PlantModel& plant, const GammaRegion& region, double r3,
                                      DecouplingChoice dec = DecouplingChoice::canonical) {
    const auto freqs = singular_frequencies(plant, region, r3, nullptr, dec);
    int z = 0;
    for (const auto& f : freqs)
        if (!f.is_real_axis) ++z;
    return z;
}

// census quantities feeding the Z thresholds
struct ZCensus {
    // hurwitz (Theorems 2-3): N, M, P, J, J0
    // circles (Theorem 4):    N, R, J, Jplus, Jminus
    int N = 0, M = 0, P = 0, J = 0, J0 = 0;
    int R = 0, Jplus = 0, Jminus = 0;
};

struct RequiredZ {
    int threshold = 0;
    ZCensus census;
};

// Threshold on the number of interior singular frequencies necessary for
// stability. Hurwitz: Z >= (E(N-M+2P-J-1) - E(J0))/2; circles:
// Z >= N - R - (J + E(J+) + E(J-) + 2)/2, rounded up.
inline RequiredZ required_Z(const PlantModel& plant, const GammaRegion& region,
                            DecouplingChoice dec = DecouplingChoice::canonical,
                            double boundary_tol = 1e-9) {
    RequiredZ out;
    out.census.N = plant.closed_loop_degree();
    out.census.M = plant.A.degree();
    if (region.is_hurwitz()) {
        const RealPoly As = plant.A.shifted(region.sigma0);
        if (As.degree() >= 1) {
            for (const auto& r : cluster_roots(roots(As))) {
                if (std::abs(r.value.real()) <= boundary_tol) {
                    if (std::abs(r.value) <= boundary_tol)
                        out.census.J0 += r.multiplicity;
                    else
                        out.census.J += r.multiplicity;
                } else if (r.value.real() > 0.0) {
                    out.census.P += r.multiplicity;
                }
            }
        }
        const int arg = out.census.N - out.census.M + 2 * out.census.P - out.census.J - 1;
        out.threshold = (even_floor(std::max(arg, 0)) - even_floor(out.census.J0)) / 2;
    } else {
        const RealPoly AE = plant.A * decoupling_function(region, dec);
        const double zp = region.m + region.rho, zm = region.m - region.rho;
        for (const auto& r : cluster_roots(roots(AE))) {
            const double d = region.signed_distance(r.value);
            if (std::abs(d) <= boundary_tol) {
                if (std::abs(r.value - zp) <= 1e-6 * (1.0 + std::abs(zp)))
                    out.census.Jplus += r.multiplicity;
                else if (std::abs(r.value - zm) <= 1e-6 * (1.0 + std::abs(zm)))
                    out.census.Jminus += r.multiplicity;
                else
                    out.census.J += r.multiplicity;
            } else if (d < 0.0) {
                out.census.R += r.multiplicity;
            }
        }
        const int twice = 2 * (out.census.N - out.census.R) -
                          (out.census.J + even_floor(out.census.Jplus) + even_floor(out.census.Jminus) + 2);
        out.threshold = (twice + (twice > 0 ? 1 : 0)) / 2;  // ceil for odd J
    }
    out.threshold = std::max(out.threshold, 0);
    return out;
}

enum class Sufficiency { necessary_only, necessary_and_sufficient };

struct KpInterval {
    double lo = 0.0, hi = 0.0;
    int Z = 0;
    int required_Z = 0;
    bool admissible = false;
    Sufficiency sufficiency = Sufficiency::necessary_only;
};

// Partition of the r3 search range at the kP-plot extrema and branch-endpoint
// values; each cell carries its constant frequency count and the
// admissibility verdict of the counting theorems.
inline std::vector<KpInterval> admissible_intervals(const PlantModel& plant,
                                                    const GammaRegion& region,
                                                    std::pair<double, double> search_range,
                                                    DecouplingChoice dec = DecouplingChoice::canonical) {
    if (!(search_range.first < search_range.second))
        throw DomainError("admissible_intervals: empty search range");
    const RequiredZ rz = required_Z(plant, region, dec);
    const KpPlot plot =
        kp_plot(plant, region, {0.0, detail::default_param_max(plant, region)}, 8192, dec);
    std::vector<double> cuts{search_range.first, search_range.second};
    for (const auto& e : plot.extrema)
        if (e.r3 > search_range.first && e.r3 < search_range.second) cuts.push_back(e.r3);
    for (double v : plot.endpoint_values)
        if (v > search_range.first && v < search_range.second) cuts.push_back(v);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end(),
                           [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }),
               cuts.end());

    std::vector<KpInterval> out;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        KpInterval cell;
        cell.lo = cuts[i];
        cell.hi = cuts[i + 1];
        cell.required_Z = rz.threshold;
        cell.Z = count_singular_frequencies(plant, region, 0.5 * (cell.lo + cell.hi), dec);
        cell.admissible = cell.Z >= cell.required_Z;
        cell.sufficiency = (rz.census.N <= 6) ? Sufficiency::necessary_and_sufficient
                                              : Sufficiency::necessary_only;
        out.push_back(cell);
    }
    return out;
}

inline std::vector<KpInterval> admissible_intervals(const PlantModel& plant,
                                                    const GammaRegion& region,
                                                    DecouplingChoice dec = DecouplingChoice::canonical) {
    return admissible_intervals(plant, region, {-100.0, 100.0}, dec);
}

// maximal admissible sub-intervals (adjacent admissible cells merged)
inline std::vector<std::pair<double, double>> admissible_union(const std::vector<KpInterval>& cells) {
    std::vector<std::pair<double, double>> out;
    for (const auto& c : cells) {
        if (!c.admissible) continue;
        if (!out.empty() && std::abs(out.back().second - c.lo) <= 1e-9 * std::max(1.0, std::abs(c.lo)))
            out.back().second = c.hi;
        else
            out.emplace_back(c.lo, c.hi);
    }
    return out;
}

struct StabilityPeak {
    double kP = 0.0, kI = 0.0, kD = 0.0;
    std::array<double, 3> omega{0, 0, 0};
    bool remainder_stable = false;
    RealPoly remainder;
};

// Isolated kP where three boundary lines are concurrent and the remainder
// polynomial decides relevance. Sweeps kP, watches the normalized 3x3
// concurrency determinant per frequency triple, bisects sign changes.
inline std::vector<StabilityPeak> stability_peaks(const PlantModel& plant, const GammaRegion& region,
                                                  const KpInterval& interval, int sweep_samples = 2001) {
    if (!region.is_hurwitz()) throw DomainError("stability_peaks: hurwitz regions only");
    if (plant.closed_loop_degree() <= 6)
        throw DomainError("stability_peaks: N <= 6 needs no peak search (the counting condition is sufficient)");

    auto lines_at = [&](double kp) {
        std::vector<BoundaryLine> ls;
        for (const auto& f : singular_frequencies(plant, region, kp)) {
            if (f.is_real_axis) continue;
            ls.push_back(boundary_line(plant, region, kp, f));
        }
        return ls;
    };
    auto det3 = [](const BoundaryLine& a, const BoundaryLine& b, const BoundaryLine& c) {
        return a.h1 * (b.h2 * c.h0 - c.h2 * b.h0) - a.h2 * (b.h1 * c.h0 - c.h1 * b.h0) +
               a.h0 * (b.h1 * c.h2 - c.h1 * b.h2);
    };

    std::vector<StabilityPeak> peaks;
    const double span = interval.hi - interval.lo;
    const double lo = interval.lo + 1e-6 * std::max(1.0, std::abs(span));
    const double hi = interval.hi - 1e-6 * std::max(1.0, std::abs(span));
    if (!(lo < hi)) return peaks;

    std::vector<BoundaryLine> prev = lines_at(lo);
    double prev_kp = lo;
    for (int i = 1; i < sweep_samples; ++i) {
        const double kp = lo + (hi - lo) * static_cast<double>(i) / (sweep_samples - 1);
        std::vector<BoundaryLine> curr = lines_at(kp);
        if (curr.size() == prev.size() && curr.size() >= 3) {
            const size_t Z = curr.size();
            for (size_t a = 0; a < Z; ++a)
                for (size_t b = a + 1; b < Z; ++b)
                    for (size_t c = b + 1; c < Z; ++c) {
                        const double d0 = det3(prev[a], prev[b], prev[c]);
                        const double d1 = det3(curr[a], curr[b], curr[c]);
                        if (!(d0 * d1 < 0.0)) continue;
                        // bisect the concurrency in kP
                        double x0 = prev_kp, x1 = kp, f0 = d0;
                        for (int it = 0; it < 100 && x1 - x0 > 1e-8 * std::max(1.0, std::abs(x1)); ++it) {
                            const double xm = 0.5 * (x0 + x1);
                            auto lm = lines_at(xm);
                            if (lm.size() != Z) break;
                            const double fm = det3(lm[a], lm[b], lm[c]);
                            if (fm * f0 <= 0.0) x1 = xm;
                            else { x0 = xm; f0 = fm; }
                        }
                        const double kpk = 0.5 * (x0 + x1);
                        auto lm = lines_at(kpk);
                        if (lm.size() != Z) continue;
                        StabilityPeak pk;
                        pk.kP = kpk;
                        pk.omega = {lm[a].source.param, lm[b].source.param, lm[c].source.param};
                        const double dd = lm[a].h1 * lm[b].h2 - lm[a].h2 * lm[b].h1;
                        if (std::abs(dd) < 1e-14) continue;
                        pk.kI = (-lm[a].h0 * lm[b].h2 + lm[b].h0 * lm[a].h2) / dd;
                        pk.kD = (-lm[a].h1 * lm[b].h0 + lm[a].h0 * lm[b].h1) / dd;
                        // remainder from dividing out the three boundary root pairs
                        const RealPoly p = closed_loop(plant, q_basis(region), pk.kI, pk.kD, pk.kP);
                        RealPoly divisor{1.0};
                        for (double w : pk.omega) divisor = divisor * RealPoly{w * w, 0.0, 1.0};
                        auto [quot, rem] = p.divmod(divisor);
                        if (rem.max_abs_coeff() > 1e-5 * std::max(1.0, p.max_abs_coeff())) continue;
                        pk.remainder = quot;
                        pk.remainder_stable = true;
                        if (quot.degree() >= 1) {
                            for (const cplx& r : roots(quot))
                                if (r.real() >= region.sigma0) pk.remainder_stable = false;
                        } else if (quot.is_zero()) {
                            pk.remainder_stable = false;
                        }
                        bool dup = false;
                        for (const auto& q : peaks)
                            if (std::abs(q.kP - pk.kP) <= 1e-6 * std::max(1.0, std::abs(pk.kP))) dup = true;
                        if (!dup) peaks.push_back(std::move(pk));
                    }
        }
        prev = std::move(curr);
        prev_kp = kp;
    }
    return peaks;
}

}  // namespace pidreg
