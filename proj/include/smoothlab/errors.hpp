#pragma once

#include <stdexcept>
#include <string>

namespace smoothlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad input or violated precondition. CLI exit code 2.
struct ValidationError : Error {
    using Error::Error;
};

// A table, enumeration or search would exceed its configured budget. CLI exit code 3.
struct ResourceError : Error {
    using Error::Error;
};

// 64-bit integer arithmetic would overflow.
struct OverflowError : ValidationError {
    using ValidationError::ValidationError;
};

// Condition number requested for the zero matrix.
struct UndefinedConditionError : ValidationError {
    using ValidationError::ValidationError;
};

struct ConvergenceError : Error {
    ConvergenceError(const std::string& what, double residual_)
        : Error(what), residual(residual_) {}
    double residual;
};

// A constructive routine found no object satisfying its postconditions.
struct ConstructionError : Error {
    using Error::Error;
};

}  // namespace smoothlab
