#pragma once

#include <stdexcept>
#include <string>

namespace lanemden {

// Bad input: a violated precondition or type invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical procedure did not reach its target.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double achieved_error, double estimate)
      : NumericalError(what), achieved_error_(achieved_error), estimate_(estimate) {}
  double achieved_error() const { return achieved_error_; }
  double estimate() const { return estimate_; }

 private:
  double achieved_error_;
  double estimate_;
};

class LinearSolveError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// Query point outside the interpolation grid.
class GuardBandError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

}  // namespace lanemden
