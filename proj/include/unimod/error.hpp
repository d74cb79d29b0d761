#pragma once

#include <stdexcept>
#include <string>

namespace unimod {

enum class ErrorKind {
  invalid_basis,
  conditioning,
  domain,
  range,
  resource,
  convergence,
  precondition,
  argument,
  consistency,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_basis: return "invalid-basis";
    case ErrorKind::conditioning: return "conditioning";
    case ErrorKind::domain: return "domain";
    case ErrorKind::range: return "range";
    case ErrorKind::resource: return "resource";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::argument: return "argument";
    case ErrorKind::consistency: return "consistency";
  }
  return "unknown";
}

// Base of every exception thrown by the library. The kind lets the command
// line front end map failures onto exit codes without catching each type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

template <ErrorKind K>
class TaggedError : public Error {
 public:
  explicit TaggedError(const std::string& what) : Error(K, what) {}
};

using InvalidBasisError = TaggedError<ErrorKind::invalid_basis>;
using ConditioningError = TaggedError<ErrorKind::conditioning>;
using DomainError = TaggedError<ErrorKind::domain>;
using RangeError = TaggedError<ErrorKind::range>;
using ResourceError = TaggedError<ErrorKind::resource>;
using PreconditionError = TaggedError<ErrorKind::precondition>;
using ArgumentError = TaggedError<ErrorKind::argument>;
using ConsistencyError = TaggedError<ErrorKind::consistency>;

// Raised when an iterative numerical method runs out of budget. Carries the
// best estimate reached so callers can still report it.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_estimate,
                   double error_estimate)
      : Error(ErrorKind::convergence, what),
        best_estimate_(best_estimate),
        error_estimate_(error_estimate) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

}  // namespace unimod
