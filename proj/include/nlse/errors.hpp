#pragma once

#include <stdexcept>
#include <string>

namespace nlse {

// Base class for all computational failures raised by the library.
// Configuration mistakes (bad arguments, inconsistent grids) throw
// std::invalid_argument instead.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Q(omega, s) has no positive zero on the scan range: omega lies outside
// the admissible frequency set.
struct NoRootError : Error {
    using Error::Error;
};

// The first zero of Q(omega, .) is tangential: |dQ/ds| below tolerance.
struct DegenerateError : Error {
    using Error::Error;
};

// The transformed mass integrand evaluated to a non-finite value.
struct QuadratureError : Error {
    using Error::Error;
};

// Integral and finite-difference values of a derivative disagree.
struct ConsistencyError : Error {
    using Error::Error;
};

// The shooting trajectory left the monotone decay regime before reaching
// the tail threshold.
struct TailBlowupError : Error {
    using Error::Error;
};

// Operation requires G'' but the nonlinearity does not provide it.
struct CapabilityError : Error {
    using Error::Error;
};

// A linear solve hit a numerically singular operator.
struct SingularSolveError : Error {
    using Error::Error;
};

} // namespace nlse
