#pragma once

#include <stdexcept>
#include <string>

namespace pidreg {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// operation applied to a polynomial of unsuitable degree (zero polynomial, constant)
struct DegreeError : Error {
    using Error::Error;
};

// argument outside the mathematical domain of the operation
struct DomainError : Error {
    using Error::Error;
};

// operation not defined for this region kind
struct NotApplicable : Error {
    using Error::Error;
};

// the singular-frequency equation degenerated to the zero polynomial
struct DegenerateSlice : Error {
    using Error::Error;
};

// A(jw) (or A*E on the boundary) vanished at a sampled/solved point
struct PoleOnAxis : Error {
    using Error::Error;
};

// propagated and verified eigenvalue censuses disagree
struct ConsistencyError : Error {
    using Error::Error;
};

// dp/dz = 0 at a singular frequency; the transition is undefined there
struct DegenerateEigenvalue : Error {
    using Error::Error;
};

// quasi-polynomial check came too close to the boundary to call
struct Inconclusive : Error {
    using Error::Error;
};

// Theorem-5 delta choice makes the principal term vanish
struct DeltaInvalid : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

// Non-fatal conditions recorded on results instead of thrown.
enum class DiagnosticKind {
    singular_cancellation,  // root of A*E_Gamma on the boundary coincides with a frequency
    degenerate_eigenvalue,  // dp/dz = 0 at a singular frequency; transitions unavailable
    truncated_face,         // face clipped by the bounding box
    merged_lines,           // two coincident boundary lines merged
    degree_drop,            // closed-loop leading coefficient vanishes inside the slice
};

struct Diagnostic {
    DiagnosticKind kind;
    std::string detail;
};

}  // namespace pidreg
