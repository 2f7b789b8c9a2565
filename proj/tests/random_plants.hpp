#pragma once

// Random low-order Hurwitz test plants (N <= 6) with well-separated structure:
// no A-roots hugging the imaginary axis, nonzero A(0), bounded coefficients.

#include <random>

#include "pidreg/plant.hpp"

namespace pidreg::testdata {

inline PlantModel random_plant(std::mt19937& rng) {
    std::uniform_real_distribution<double> coeff(-5.0, 5.0);
    std::uniform_int_distribution<int> mdist(0, 3);
    for (;;) {
        const int m = mdist(rng);
        std::uniform_int_distribution<int> ndist(1, std::min(6, m + 2));
        const int n = ndist(rng);
        std::vector<double> a(static_cast<size_t>(m) + 1), b(static_cast<size_t>(n) + 1);
        for (auto& v : a) v = coeff(rng);
        for (auto& v : b) v = coeff(rng);
        PlantModel p;
        p.A = RealPoly(std::move(a));
        p.B = RealPoly(std::move(b));
        p.domain = Domain::continuous;
        if (p.A.degree() != m || p.B.degree() != n) continue;
        if (std::abs(p.A.leading()) < 0.2 || std::abs(p.B.leading()) < 0.2) continue;
        if (std::abs(p.A.eval(0.0)) < 0.2) continue;
        bool axis_root = false;
        if (p.A.degree() >= 1)
            for (const auto& r : roots(p.A))
                if (std::abs(r.real()) < 0.05) axis_root = true;
        if (axis_root) continue;
        return p;
    }
}

}  // namespace pidreg::testdata
