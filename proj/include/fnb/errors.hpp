#pragma once

#include <stdexcept>
#include <string>

namespace fnb {

/// Base of every error raised by the library. `exit_code()` is the CLI
/// process status the error maps to.
class Error : public std::runtime_error {
 public:
  Error(const std::string& what, int code) : std::runtime_error(what), code_(code) {}
  int exit_code() const noexcept { return code_; }

 private:
  int code_;
};

/// Malformed files, invalid flags, violated preconditions on user data.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what, 1) {}
};

/// A map or complex is not in general position where it has to be.
class DegeneracyError : public Error {
 public:
  explicit DegeneracyError(const std::string& what) : Error(what, 2) {}
};

class PerturbationError : public Error {
 public:
  explicit PerturbationError(const std::string& what) : Error(what, 2) {}
};

/// A sample point hit a cell boundary; callers retry with another sample.
class GenericityError : public Error {
 public:
  explicit GenericityError(const std::string& what) : Error(what, 2) {}
};

/// A guaranteed object (principal component, schedule, Tucker path) was
/// not found, or internal bookkeeping contradicts itself.
class TheoremViolation : public Error {
 public:
  explicit TheoremViolation(const std::string& what) : Error(what, 3) {}
};

}  // namespace fnb
