#pragma once

#include <stdexcept>
#include <string>

namespace prophet {

/// Machine-readable failure category, surfaced by the CLI as an exit code.
enum class ErrorCategory {
  Parse,
  Validation,
  EnumerationCap,
  InvalidArgument,
  Internal,
};

const char* category_name(ErrorCategory c);
int category_exit_code(ErrorCategory c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}
  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error(ErrorCategory::Parse, what) {}
};

class InvalidInstance : public Error {
 public:
  explicit InvalidInstance(const std::string& what)
      : Error(ErrorCategory::Validation, what) {}
};

class EnumerationTooLarge : public Error {
 public:
  explicit EnumerationTooLarge(const std::string& what)
      : Error(ErrorCategory::EnumerationCap, what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCategory::InvalidArgument, what) {}
};

/// Broken internal invariant; indicates a bug or inconsistent inputs.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(ErrorCategory::Internal, what) {}
};

}  // namespace prophet
