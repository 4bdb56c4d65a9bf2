#pragma once

#include <stdexcept>
#include <string>

namespace symtomo {

/// Error categories. The numeric value is the CLI exit code.
enum class ErrorKind : int {
  InvalidArgument = 2,
  Numerical = 3,
  Io = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }
  int exit_code() const noexcept { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& w) : Error(ErrorKind::InvalidArgument, w) {}
};

/// (mu, nu) = (0, 0) has no quadrature direction.
struct DegenerateDirection : Error {
  explicit DegenerateDirection(const std::string& w) : Error(ErrorKind::InvalidArgument, w) {}
};

/// Requested orbital cannot be represented on the grid.
struct ResolutionError : Error {
  explicit ResolutionError(const std::string& w) : Error(ErrorKind::InvalidArgument, w) {}
};

struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};

/// Too much norm reached the edge of the periodic box.
struct AliasingError : Error {
  explicit AliasingError(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};

/// Angular sampling insufficient for an inversion.
struct CoverageError : Error {
  explicit CoverageError(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::Io, w) {}
};

}  // namespace symtomo
