#pragma once

#include <stdexcept>
#include <string>

namespace helispin {

// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid argument or parameter values. The CLI maps this to a usage error.
class DomainError : public Error {
  public:
    using Error::Error;
};

// The effective rotating-frame axis is undefined (phi = pi with the frame
// offset field equal to B0).
class DegenerateConfigError : public Error {
  public:
    using Error::Error;
};

// The step-halving error estimate is still above the requested tolerance at
// the refinement cap.
class NonConvergedError : public Error {
  public:
    NonConvergedError(double estimate, double tolerance, long steps)
        : Error("integration did not converge: estimate " + std::to_string(estimate) +
                " > tolerance " + std::to_string(tolerance) + " at " + std::to_string(steps) +
                " steps"),
          estimate(estimate), tolerance(tolerance), steps(steps) {}

    double estimate;
    double tolerance;
    long steps;
};

// The evolved state failed to return to the initial ray after a full cycle.
class NotCyclicError : public Error {
  public:
    explicit NotCyclicError(double overlap_magnitude)
        : Error("evolution is not cyclic: |<psi0|psi(T)>| = " + std::to_string(overlap_magnitude)),
          overlap_magnitude(overlap_magnitude) {}

    double overlap_magnitude;
};

// A successive difference in a wrapped phase sequence sits within 1e-9 of pi,
// so the continuous branch cannot be chosen.
class AmbiguousUnwrapError : public Error {
  public:
    using Error::Error;
};

// Malformed data file. `line` is 1-based.
class ParseError : public Error {
  public:
    ParseError(const std::string& what, long line)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}

    long line;
};

// A data-file header declares units the reader does not understand.
class UnitError : public Error {
  public:
    using Error::Error;
};

}  // namespace helispin
