#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace momentlines {

enum class ErrorKind {
  InvalidInput,
  PreconditionFailed,
  NumericalFailure,
  NotSolvableOnTheseLines,
  SearchExhausted,
  InternalAssertion,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid_input";
    case ErrorKind::PreconditionFailed: return "precondition_failed";
    case ErrorKind::NumericalFailure: return "numerical_failure";
    case ErrorKind::NotSolvableOnTheseLines: return "not_solvable_on_these_lines";
    case ErrorKind::SearchExhausted: return "search_exhausted";
    case ErrorKind::InternalAssertion: return "internal_assertion";
  }
  return "unknown";
}

/// Exception thrown by every solver in the library. The kind tells callers
/// (notably the CLI) how to map the failure onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace momentlines
