#pragma once
#include <stdexcept>
#include <string>

namespace dynr {

// Thrown when a requested construction is outside the implemented domain
// (the caller picked inputs the construction cannot handle).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a root subset fails the closure/negation requirements.
struct InvalidRootSubset : std::runtime_error {
    explicit InvalidRootSubset(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when the r00 linear system has no solution.
struct InfeasibleR00 : std::runtime_error {
    explicit InfeasibleR00(const std::string& what) : std::runtime_error(what) {}
};

// Thrown for triples whose orbit structure has no closed form here
// (e.g. a non-identity map on the stable core).
struct Unsupported : std::runtime_error {
    explicit Unsupported(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an evaluation lands too close to a pole of a coefficient.
struct PoleProximity : std::runtime_error {
    explicit PoleProximity(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when none of the candidate representation conventions passes the
// constant-matrix oracles (indicates a sign or index regression).
struct CalibrationError : std::runtime_error {
    explicit CalibrationError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on malformed serialized input; message carries a JSON-pointer-ish path.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dynr
