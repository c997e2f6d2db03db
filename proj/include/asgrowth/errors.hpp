#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asgrowth {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A line of a delegated-statistics or snapshot file that does not conform
/// to the expected format.  Carries the 1-based line number.
class MalformedRecord : public Error {
public:
    MalformedRecord(std::size_t line_number, const std::string& reason)
        : Error("line " + std::to_string(line_number) + ": " + reason),
          line_number(line_number),
          reason(reason) {}

    std::size_t line_number;
    std::string reason;
};

/// No record matched the requested country / resource type.
class NoRecords : public Error {
public:
    using Error::Error;
};

/// Input too short or otherwise unusable for the requested operation.
class DegenerateInput : public Error {
public:
    using Error::Error;
};

/// A segment shorter than the minimum segment length was requested.
class DegenerateSegment : public Error {
public:
    using Error::Error;
};

/// The input has zero variance where a spread is required.
class ZeroVariance : public Error {
public:
    using Error::Error;
};

/// The regression design matrix is rank deficient.
class SingularRegression : public Error {
public:
    using Error::Error;
};

/// An optimizer exhausted its iteration budget without meeting tolerance.
/// Carries the best point found so callers can inspect how close it got.
class NonConvergence : public Error {
public:
    NonConvergence(int iterations, double best_objective)
        : Error("optimizer did not converge after " +
                std::to_string(iterations) +
                " iterations (best objective " +
                std::to_string(best_objective) + ")"),
          iterations(iterations),
          best_objective(best_objective) {}

    int iterations;
    double best_objective;
};

/// The fitted MA polynomial ended up outside the invertibility region.
class NonInvertible : public Error {
public:
    using Error::Error;
};

/// Two inputs that must align (by length or by year) do not.
class LengthMismatch : public Error {
public:
    using Error::Error;
};

/// An argument outside the mathematical domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A ratio with a zero denominator.
class DivisionByZero : public Error {
public:
    using Error::Error;
};

/// An invalid analysis configuration, rejected before any computation.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace asgrowth
