#pragma once

#include <stdexcept>

namespace advdiff {

/// Violated input contract (bad grid sizes, off-grid times, ...).
/// The CLI maps this to exit code 2.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Numerical failure inside a solver (singular factorization, indefinite
/// forms). The CLI maps this to exit code 3.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace advdiff
