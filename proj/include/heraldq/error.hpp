#pragma once

#include <stdexcept>
#include <string>

namespace heraldq {

/// Failure categories. The CLI maps each one to a distinct exit code.
enum class ErrorKind {
  validation,  ///< bad input: out-of-range parameter, unknown config key, ...
  truncation,  ///< Fock-space cutoff too small for the requested accuracy
  degeneracy,  ///< a quantity is undefined at this point (v_g = 0, no heralds, ...)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::validation, what) {}
};

class TruncationError : public Error {
 public:
  explicit TruncationError(const std::string& what)
      : Error(ErrorKind::truncation, what) {}
};

class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& what)
      : Error(ErrorKind::degeneracy, what) {}
};

}  // namespace heraldq
