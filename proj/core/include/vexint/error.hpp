#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vexint {

enum class ErrorKind {
  invalid_configuration,
  resolution_exceeded,
  invalid_exponent,
  conjugate_undefined,
  invalid_input,
  solver_failure,
  precondition_violation,
  invalid_selection,
  admissibility_failure,
  unsupported_parameters,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library; kind() identifies the failed contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace vexint
