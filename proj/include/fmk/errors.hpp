#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fmk {

enum class ErrorKind {
  invalid_argument,
  division_by_zero,
  not_reducible,
  invalid_witness,
  internal_error,
  unsupported_reduction,
  singular_curve,
  singular_reduction,
  unsupported_prime,
  invalid_eigenvalue,
  missing_eigenvalue,
  load_error,
  write_error,
  budget_exceeded,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::division_by_zero: return "division-by-zero";
    case ErrorKind::not_reducible: return "not-reducible";
    case ErrorKind::invalid_witness: return "invalid-witness";
    case ErrorKind::internal_error: return "internal-error";
    case ErrorKind::unsupported_reduction: return "unsupported-reduction";
    case ErrorKind::singular_curve: return "singular-curve";
    case ErrorKind::singular_reduction: return "singular-reduction";
    case ErrorKind::unsupported_prime: return "unsupported-prime";
    case ErrorKind::invalid_eigenvalue: return "invalid-eigenvalue";
    case ErrorKind::missing_eigenvalue: return "missing-eigenvalue";
    case ErrorKind::load_error: return "load-error";
    case ErrorKind::write_error: return "write-error";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
  }
  return "unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) fail(kind, what);
}

}  // namespace fmk
