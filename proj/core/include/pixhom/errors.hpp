#pragma once

#include <stdexcept>
#include <string>

namespace pixhom {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class GeometryErrorKind {
  MalformedHeader,
  InvalidDimensions,
  InconsistentRow,
  InvalidCharacter,
  RowCountMismatch,
  MissingFinalNewline,
  AllHole,
  Disconnected,
  NotRotationTestable,
  Unreadable,
};

const char* to_string(GeometryErrorKind kind);

class GeometryError : public Error {
 public:
  GeometryError(GeometryErrorKind kind, const std::string& detail)
      : Error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  GeometryErrorKind kind() const noexcept { return kind_; }

 private:
  GeometryErrorKind kind_;
};

/// Iterative solve did not converge, or the discrete system is singular.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Extracted effective moduli are not all positive.
class NotPositiveDefiniteError : public Error {
 public:
  NotPositiveDefiniteError() : Error("effective tensor not positive definite") {}
};

/// Effective matrix deviates from square symmetry beyond the tolerance.
class SymmetryError : public Error {
 public:
  SymmetryError(double residual, double tolerance);
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A line-based computation cannot run on this geometry or loading.
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

}  // namespace pixhom
