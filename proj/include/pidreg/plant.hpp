#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pidreg/region.hpp"

namespace pidreg {

enum class Domain { continuous, discrete, delay };

inline const char* to_string(Domain d) {
    switch (d) {
        case Domain::continuous: return "continuous";
        case Domain::discrete: return "discrete";
        case Domain::delay: return "delay";
    }
    return "?";
}

// One feedback-loop representant: the closed-loop identity is
//   p = A*Q + B                     (continuous / discrete)
//   p = A*(kI + kP s + kD s^2) + B e^{L s}   (delay, L > 0)
struct PlantModel {
    RealPoly A, B;
    std::optional<double> delay;  // L, seconds; delay domain only
    Domain domain = Domain::continuous;
    std::string name;

    bool is_quasi() const { return domain == Domain::delay; }
    double L() const { return delay.value_or(0.0); }

    int m() const { return A.degree(); }
    int n() const { return B.degree(); }

    // generic closed-loop degree: max(deg A + 2, deg B)
    int closed_loop_degree() const { return std::max(A.degree() + 2, B.degree()); }

    // neutral: n == m + 2; retarded: n > m + 2 (delay domain)
    bool is_neutral() const { return is_quasi() && n() == m() + 2; }
    bool is_retarded() const { return is_quasi() && n() > m() + 2; }

    void validate() const {
        if (A.is_zero()) throw DomainError("plant: A must be nonzero");
        if (B.is_zero()) throw DomainError("plant: B must be nonzero");
        if (is_quasi()) {
            if (!(L() > 0.0)) throw DomainError("delay plant: L must be > 0");
            if (n() < m() + 2)
                throw DomainError(
                    "delay plant: principal term requires deg B >= deg A + 2 "
                    "(e^{Ls} must be multiplied by the highest power in s)");
        } else if (delay.has_value()) {
            throw DomainError("delay given for non-delay domain");
        }
    }

    GammaRegion natural_region() const {
        return domain == Domain::discrete ? GammaRegion::schur() : GammaRegion::hurwitz();
    }
};

inline RealPoly closed_loop(const PlantModel& plant, const QBasis& basis, double r1, double r2,
                            double r3) {
    return plant.A * basis.q_of(r1, r2, r3) + plant.B;
}

// Unity-feedback PID loop for a plant transfer function num/den:
//   1 + (kI + kP s + kD s^2)/s * num/den = 0  =>  A = num, B = s*den.
inline PlantModel plant_from_tf(const RealPoly& num, const RealPoly& den, Domain domain,
                                std::optional<double> delay = std::nullopt) {
    PlantModel p;
    p.A = num;
    p.B = RealPoly::x() * den;
    p.domain = domain;
    p.delay = delay;
    p.validate();
    return p;
}

struct PlantFamily {
    std::vector<PlantModel> members;
    GammaRegion region = GammaRegion::hurwitz();

    void validate() const {
        if (members.empty()) throw DomainError("plant family must be nonempty");
        for (const auto& p : members) p.validate();
    }
    bool single() const { return members.size() == 1; }
};

}  // namespace pidreg
