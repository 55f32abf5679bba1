#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace circuitflow {

/// Base class for every recoverable failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a model constraint (bad weight, unknown id, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Refusal to run an exponential or memory-bounded routine beyond its guard.
class GuardError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Bad command-line usage (unknown method, out-of-range count, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// An iterative routine hit its iteration cap.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(std::size_t iterations, double residual)
        : Error("no convergence after " + std::to_string(iterations) +
                " iterations (last max change " + std::to_string(residual) + ")"),
          iterations_(iterations), residual_(residual) {}

    std::size_t iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    std::size_t iterations_;
    double residual_;
};

/// A caller broke a documented precondition (e.g. a non-dominant system).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace circuitflow
