#pragma once

#include <stdexcept>
#include <string>

namespace landau {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: grid sizes, exponents, radii, CLI values.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Non-finite input data (NaN or Inf in a field).
class DataError : public Error {
 public:
  using Error::Error;
};

/// An operation was called on input violating its precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A field whose moments vanish, so normalization ratios are undefined.
class DegenerateFieldError : public Error {
 public:
  using Error::Error;
};

/// Weight construction failed (no root, rejected ODE step).
class ConstructionError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver or linear-algebra failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A time step could not be completed.
class StepError : public Error {
 public:
  using Error::Error;
};

}  // namespace landau
