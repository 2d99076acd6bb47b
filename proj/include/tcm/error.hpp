// error.hpp: exception types shared by the engine and the CLI.
#pragma once

#include <stdexcept>
#include <string>

namespace tcm {

// Invalid arguments or configuration. The CLI maps this to exit status 2.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Eigen-solver failures, orthonormality loss, invariant violations.
// The CLI maps this (and subclasses) to exit status 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A distribution or basis could not be truncated within tolerance.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double achieved_tail)
      : NumericalError(what), achieved_tail_(achieved_tail) {}
  double achieved_tail() const noexcept { return achieved_tail_; }

 private:
  double achieved_tail_;
};

// A physical bound was violated by a computed observable.
class InvariantViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// File output failed. The CLI maps this to exit status 4.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tcm
