#pragma once

#include <stdexcept>
#include <string>

namespace gdq {

/// Base for every error raised by the library. The CLI maps the concrete
/// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or violated precondition (bad grid size, negative ratio...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed or out-of-range run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Equation/DOF bookkeeping failure during assembly.
class AccountingError : public Error {
 public:
  using Error::Error;
};

/// Boundary block could not be inverted during condensation.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Eigen decomposition failed or rejected too many eigenvalues.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// A preset's derived quantity drifted from its documented value.
class PresetAssertionError : public Error {
 public:
  using Error::Error;
};

}  // namespace gdq
