#pragma once

#include <stdexcept>
#include <string>

namespace levmap {

/// Base class for all levmap domain errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite or out-of-domain input (sigma <= 0, bad axis spec, ...).
class InvalidParameterError : public Error {
public:
    using Error::Error;
};

/// Probabilities outside (0,1) or not summing to one.
class InvalidProbabilityError : public InvalidParameterError {
public:
    using InvalidParameterError::InvalidParameterError;
};

/// Binary bet with p <= q has no Kelly edge.
class NoEdgeError : public Error {
public:
    using Error::Error;
};

/// Portfolio state with S <= 0 or B <= 0.
class DegenerateStateError : public Error {
public:
    using Error::Error;
};

/// Levy denominator psi(2s) - 2 psi(s) vanishing, or gamma == 1 in the
/// fixed-point algebra.
class DegenerateExponentError : public Error {
public:
    using Error::Error;
};

/// Price (or money-market unit) driven to zero or below by a step.
class DynamicsBreakdownError : public Error {
public:
    using Error::Error;
};

/// A matching call option does not exist (lambda <= sigma).
class NoSolutionError : public Error {
public:
    using Error::Error;
};

}  // namespace levmap
