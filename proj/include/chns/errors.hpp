// Error types shared across the solver library.

#pragma once

#include <stdexcept>
#include <string>

namespace chns {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the mathematical domain of a kernel (e.g. F_a with a <= 0).
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// Phase-variable bound |phi| < 1 violated.
struct OutOfBounds : Error {
    explicit OutOfBounds(const std::string& msg) : Error(msg) {}
};

/// Mean-zero precondition violated (inverse Laplacian, projected solves).
struct NonZeroMean : Error {
    explicit NonZeroMean(const std::string& msg) : Error(msg) {}
};

/// Iterative linear solver exceeded its iteration cap.
struct NoConvergence : Error {
    NoConvergence(const std::string& msg, int iterations, double residual)
        : Error(msg), iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

/// Newton iteration for the phase equation failed to reduce the residual.
struct NewtonFailure : Error {
    NewtonFailure(const std::string& msg, int iterations, double residual)
        : Error(msg), iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

/// Outer momentum/phase coupling loop failed to contract.
struct OuterNoConvergence : Error {
    OuterNoConvergence(const std::string& msg, int iterations, double update)
        : Error(msg), iterations(iterations), update(update) {}
    int iterations;
    double update;
};

/// A linear subsystem of the time step could not be solved.
struct LinearSolveFailure : Error {
    explicit LinearSolveFailure(const std::string& msg) : Error(msg) {}
};

/// Invalid run configuration; carries the offending field name.
struct ConfigError : Error {
    ConfigError(const std::string& field, const std::string& msg)
        : Error("config field '" + field + "': " + msg), field(field) {}
    std::string field;
};

} // namespace chns
