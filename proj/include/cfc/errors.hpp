#pragma once

#include <stdexcept>
#include <string>

namespace cfc {

/// Base class for all library errors. Subclasses distinguish validation
/// problems (bad inputs), numerical failures and I/O failures so the CLI can
/// map them onto distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or malformed configuration.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure inside a solver or integrator.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Filesystem / serialization failure.
class IoError : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateArgument : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SingularAt : public NumericalError {
 public:
  explicit SingularAt(double omega)
      : NumericalError("transfer matrix numerically singular at omega = " +
                       std::to_string(omega) + " rad/s"),
        omega_(omega) {}
  double omega() const { return omega_; }

 private:
  double omega_;
};

class IntegrationFailure : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class UndefinedHomodynePhase : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ContourAmbiguous : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class FitDiverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BasinEscape : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoStableRegion : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

} // namespace cfc
