#pragma once

#include <stdexcept>
#include <string>

namespace tdho {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A time or abscissa lies outside the range an object was built for.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An input violates a declared invariant; the message names the invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A coefficient profile produced a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A numerical tolerance was exceeded (Wronskian drift, norm drift, ...).
class AccuracyError : public Error {
public:
    using Error::Error;
};

/// Output sampling too sparse to resolve a continuous phase.
class SamplingError : public AccuracyError {
public:
    using AccuracyError::AccuracyError;
};

/// Crank-Nicolson norm drift beyond its budget.
class StabilityError : public AccuracyError {
public:
    using AccuracyError::AccuracyError;
};

/// A wave packet is not contained by the spatial grid.
class CoverageError : public Error {
public:
    using Error::Error;
};

/// API misuse such as combining samples that live on different grids.
class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace tdho
