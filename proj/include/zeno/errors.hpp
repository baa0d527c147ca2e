#pragma once

#include <stdexcept>
#include <string>

namespace zeno {

/// Process exit codes used by the command line tool.
enum class ExitCode : int {
  ok = 0,
  validation = 1,
  numerical = 2,
  io = 3,
};

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual ExitCode exit_code() const noexcept { return ExitCode::validation; }
};

/// An input record failed validation. `field()` names the offending field.
class ValidationError : public Error {
 public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// An operation was called outside its documented domain.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The chain configuration is valid but the requested analysis does not apply to it.
class UnsupportedConfiguration : public Error {
 public:
  using Error::Error;
};

/// The initial state is not annihilated by the watching Hamiltonian.
class AssumptionViolation : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, long rows, long cols)
      : Error(what + " (" + std::to_string(rows) + "x" + std::to_string(cols) + ")"),
        rows_(rows),
        cols_(cols) {}
  ExitCode exit_code() const noexcept override { return ExitCode::numerical; }
  long rows() const noexcept { return rows_; }
  long cols() const noexcept { return cols_; }

 private:
  long rows_;
  long cols_;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Eigenvalue clustering could not be decided within the grouping tolerance.
class AmbiguousClusteringError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::numerical; }
};

class IoError : public Error {
 public:
  using Error::Error;
  ExitCode exit_code() const noexcept override { return ExitCode::io; }
};

}  // namespace zeno
