#pragma once

#include <stdexcept>
#include <string>

namespace mirror_margin {

// Precondition or API contract broken by the caller.
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A numerical procedure failed to converge or produced non-finite values.
struct NumericError : std::runtime_error {
    NumericError(const std::string& msg, double residual = 0.0)
        : std::runtime_error(msg), residual(residual) {}
    double residual;
};

// Level-set probing failed along some direction (e.g. missing coercivity).
struct GeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Synthetic data generation could not reach a separable sample.
struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Filesystem read/write failure while loading configs or emitting artifacts.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mirror_margin
