#pragma once

#include <stdexcept>
#include <string>

namespace saplab {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter violated its documented domain. `field()` names the offender.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& message)
      : Error(message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The primary-protection constraint cannot be met by any access threshold.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine failed to converge (quadrature budget, iteration cap).
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Root finding was asked to work on an interval without a sign change.
class BracketError : public ConvergenceError {
 public:
  using ConvergenceError::ConvergenceError;
};

/// A conditional Monte Carlo estimate collected too few samples.
class SamplingError : public Error {
 public:
  using Error::Error;
};

}  // namespace saplab
