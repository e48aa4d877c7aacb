#pragma once

#include <stdexcept>
#include <string>

namespace lvr {

// Base class for all engine errors so callers can catch everything at once.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid argument domain (negative price, gamma out of range, ...).
struct DomainError : Error {
    using Error::Error;
};

// An iterative solver failed to reach its tolerance.
struct NonConvergence : Error {
    using Error::Error;
};

// Derivative requested at a kink of the value function.
struct NonSmoothPoint : Error {
    using Error::Error;
};

// Covariance matrix could not be factorized (not PSD after clamping).
struct FactorizationError : Error {
    using Error::Error;
};

// Malformed input file.
struct ParseError : Error {
    using Error::Error;
};

// Structurally valid input with out-of-range content.
struct ValidationError : Error {
    using Error::Error;
};

}  // namespace lvr
