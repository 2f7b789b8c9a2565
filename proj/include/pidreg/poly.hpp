#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "pidreg/errors.hpp"

namespace pidreg {

using cplx = std::complex<double>;

// Dense real-coefficient univariate polynomial, ascending powers.
// Trailing coefficients below 1e-12 * max|c| are stripped so that the stored
// degree matches the mathematical one (the stability-count theorems depend on
// exact degrees).
class RealPoly {
  public:
    RealPoly() = default;
    RealPoly(std::initializer_list<double> c) : c_(c) { normalize(); }
    explicit RealPoly(std::vector<double> c) : c_(std::move(c)) { normalize(); }

    static RealPoly zero() { return RealPoly{}; }
    static RealPoly constant(double v) { return RealPoly{v}; }
    static RealPoly x() { return RealPoly{0.0, 1.0}; }

    bool is_zero() const { return c_.empty(); }
    // degree of the zero polynomial reported as -1
    int degree() const { return static_cast<int>(c_.size()) - 1; }

    double coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[static_cast<size_t>(k)] : 0.0;
    }
    double leading() const { return c_.empty() ? 0.0 : c_.back(); }
    const std::vector<double>& coeffs() const { return c_; }

    double max_abs_coeff() const {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        return m;
    }

    template <typename T>
    T eval(T x) const {
        T acc{};
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    RealPoly derivative() const {
        if (c_.size() <= 1) return zero();
        std::vector<double> d(c_.size() - 1);
        for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
        return RealPoly(std::move(d));
    }

    friend RealPoly operator+(const RealPoly& a, const RealPoly& b) {
        std::vector<double> c(std::max(a.c_.size(), b.c_.size()), 0.0);
        for (size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
        return RealPoly(std::move(c));
    }
    friend RealPoly operator-(const RealPoly& a, const RealPoly& b) { return a + (-1.0) * b; }
    friend RealPoly operator*(double s, const RealPoly& p) {
        std::vector<double> c(p.c_);
        for (double& v : c) v *= s;
        return RealPoly(std::move(c));
    }
    friend RealPoly operator*(const RealPoly& p, double s) { return s * p; }
    friend RealPoly operator*(const RealPoly& a, const RealPoly& b) {
        if (a.is_zero() || b.is_zero()) return zero();
        std::vector<double> c(a.c_.size() + b.c_.size() - 1, 0.0);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return RealPoly(std::move(c));
    }

    // shift the variable: returns q with q(x) = p(x + a)
    RealPoly shifted(double a) const {
        RealPoly acc = zero(), pw = constant(1.0);
        RealPoly lin{a, 1.0};
        for (double ck : c_) {
            acc = acc + ck * pw;
            pw = pw * lin;
        }
        return acc;
    }

    // quotient and remainder of this / d
    std::pair<RealPoly, RealPoly> divmod(const RealPoly& d) const {
        if (d.is_zero()) throw DegreeError("division by zero polynomial");
        std::vector<double> rem(c_);
        std::vector<double> q(std::max<size_t>(1, c_.size() >= d.c_.size() ? c_.size() - d.c_.size() + 1 : 1), 0.0);
        const int dd = d.degree();
        for (int k = static_cast<int>(rem.size()) - 1; k >= dd && k - dd < static_cast<int>(q.size());) {
            double f = rem[static_cast<size_t>(k)] / d.c_.back();
            q[static_cast<size_t>(k - dd)] = f;
            for (int j = 0; j <= dd; ++j) rem[static_cast<size_t>(k - dd + j)] -= f * d.c_[static_cast<size_t>(j)];
            rem[static_cast<size_t>(k)] = 0.0;
            --k;
        }
        return {RealPoly(std::move(q)), RealPoly(std::move(rem))};
    }

  private:
    void normalize() {
        double m = 0.0;
        for (double v : c_) m = std::max(m, std::abs(v));
        const double cut = 1e-12 * m;
        while (!c_.empty() && std::abs(c_.back()) <= cut) c_.pop_back();
    }

    std::vector<double> c_;  // ascending; empty represents the zero polynomial
};

// Splits U(j*w) into real/imaginary parts as real polynomials in w.
// U(jw) = R(w) + j*I(w).
inline std::pair<RealPoly, RealPoly> axis_parts(const RealPoly& u) {
    std::vector<double> re(u.coeffs().size(), 0.0), im(u.coeffs().size(), 0.0);
    for (int k = 0; k <= u.degree(); ++k) {
        const double c = u.coeff(k);
        switch (k % 4) {
            case 0: re[static_cast<size_t>(k)] = c; break;
            case 1: im[static_cast<size_t>(k)] = c; break;
            case 2: re[static_cast<size_t>(k)] = -c; break;
            case 3: im[static_cast<size_t>(k)] = -c; break;
        }
    }
    return {RealPoly(std::move(re)), RealPoly(std::move(im))};
}

// All complex roots via the companion-matrix eigenvalues, polished by a few
// Newton steps and symmetrized into exact conjugate pairs.
inline std::vector<cplx> roots(const RealPoly& p) {
    if (p.degree() < 1) throw DegreeError("roots: degree must be >= 1");
    const int n = p.degree();
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -p.coeff(i) / p.leading();
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
    std::vector<cplx> out(static_cast<size_t>(n));
    const RealPoly dp = p.derivative();
    for (int i = 0; i < n; ++i) {
        cplx r = es.eigenvalues()(i);
        for (int it = 0; it < 3; ++it) {
            const cplx f = p.eval(r), df = dp.eval(r);
            if (std::abs(df) < 1e-300) break;
            const cplx step = f / df;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            if (std::abs(step) > 0.5 * (1.0 + std::abs(r))) break;  // keep multiple roots where they are
            r -= step;
        }
        out[static_cast<size_t>(i)] = r;
    }
    // pair conjugates exactly
    std::vector<bool> used(out.size(), false);
    for (size_t i = 0; i < out.size(); ++i) {
        if (used[i] || std::abs(out[i].imag()) < 1e-14 * (1.0 + std::abs(out[i]))) continue;
        size_t best = i;
        double bd = std::numeric_limits<double>::max();
        for (size_t j = 0; j < out.size(); ++j) {
            if (j == i || used[j]) continue;
            const double d = std::abs(out[j] - std::conj(out[i]));
            if (d < bd) { bd = d; best = j; }
        }
        if (best != i && bd < 1e-6 * (1.0 + std::abs(out[i]))) {
            const cplx avg = 0.5 * (out[i] + std::conj(out[best]));
            out[i] = avg;
            out[best] = std::conj(avg);
            used[i] = used[best] = true;
        }
    }
    std::sort(out.begin(), out.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

// root clustered with its multiplicity
struct ClusteredRoot {
    cplx value;
    int multiplicity = 1;
};

inline std::vector<ClusteredRoot> cluster_roots(const std::vector<cplx>& rs, double rel_tol = 1e-6) {
    std::vector<ClusteredRoot> out;
    std::vector<bool> used(rs.size(), false);
    for (size_t i = 0; i < rs.size(); ++i) {
        if (used[i]) continue;
        ClusteredRoot c{rs[i], 1};
        cplx sum = rs[i];
        for (size_t j = i + 1; j < rs.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(rs[j] - c.value) <= rel_tol * (1.0 + std::abs(c.value))) {
                used[j] = true;
                sum += rs[j];
                ++c.multiplicity;
                c.value = sum / static_cast<double>(c.multiplicity);
            }
        }
        out.push_back(c);
    }
    return out;
}

}  // namespace pidreg
