#pragma once

#include <stdexcept>
#include <string>

namespace mmest {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad or inconsistent input (dimensions, definiteness, parsing, domain
/// preconditions). Maps to CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation that could not be carried out (non-convergence, singular
/// matrices, bracketing caps). Maps to CLI exit code 3.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotPositiveDefinite : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class EmptySet : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NonFiniteEntry : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class IndexOutOfRange : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// gamma does not satisfy gamma^2 I > P_i for every model (the necessary
/// feasibility floor), or a related gamma precondition failed.
class InfeasibleGamma : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class InvalidQunder : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DegenerateTheta : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnsupportedM : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class CertificateMissing : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class ParseError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class SingularInnovation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  NoConvergence(const std::string& what, double last_residual, int iterations)
      : NumericalError(what), last_residual(last_residual), iterations(iterations) {}
  double last_residual;
  int iterations;
};

class SingularX : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoUpperBound : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularSum : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// The bisection assumed a monotone certificate in gamma and observed a
/// non-monotone pattern on the verification grid.
class NonMonotoneCertificate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace mmest
