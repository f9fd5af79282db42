#pragma once

#include <stdexcept>
#include <string>

namespace pampa {

// Bad user input: unknown problem, invalid mesh, malformed config.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A state left the model's admissible set (non-positive density or
// internal energy, non-finite entries).
struct InvalidStateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A blending coefficient saw data violating its preconditions; points to a
// CFL or admissibility failure upstream of the limiter.
struct LimiterConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wave speeds grew past the convexity bound inside a multi-stage step.
// Callers retry the step with a smaller dt.
struct CflViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An iterative solver failed to converge.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unrecoverable solver failure (retry or step cap exceeded).
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pampa
