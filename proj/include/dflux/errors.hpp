#pragma once

#include <stdexcept>
#include <string>

namespace dflux {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: configuration, geometry, CFL at setup. CLI exit code 1.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Failure while computing. CLI exit code 2.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class InterfaceAmbiguityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class MonotonicityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class AlignmentError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CflError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SequencingError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ProjectionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnsupportedOracleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ValidityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Inversion target outside the image of the bracket; indicates a wrong
// invariant interval upstream.
class RangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergentRangeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// CFL product exceeded by the realized state during a step.
class StabilityError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class MissingDataError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace dflux
